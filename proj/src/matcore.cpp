#include "uglab/matcore.hpp"

#include <algorithm>
#include <cmath>

#include "uglab/error.hpp"

namespace uglab::matcore {

CMatrix CMatrix::identity(int d) {
    CMatrix m(d);
    for (int i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::operator+(const CMatrix& o) const {
    if (dim_ != o.dim_) throw DomainError("CMatrix: dimension mismatch");
    CMatrix r(dim_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
    return r;
}

CMatrix CMatrix::operator-(const CMatrix& o) const {
    if (dim_ != o.dim_) throw DomainError("CMatrix: dimension mismatch");
    CMatrix r(dim_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
    return r;
}

CMatrix CMatrix::operator*(const CMatrix& o) const {
    if (dim_ != o.dim_) throw DomainError("CMatrix: dimension mismatch");
    const int d = dim_;
    CMatrix r(d);
    for (int i = 0; i < d; ++i) {
        for (int k = 0; k < d; ++k) {
            const cplx aik = (*this)(i, k);
            if (aik == cplx(0.0, 0.0)) continue;
            for (int j = 0; j < d; ++j) r(i, j) += aik * o(k, j);
        }
    }
    return r;
}

CMatrix CMatrix::operator*(cplx s) const {
    CMatrix r(dim_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * s;
    return r;
}

CMatrix CMatrix::adjoint() const {
    CMatrix r(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

bool CMatrix::all_finite() const {
    for (const cplx& v : a_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

cplx trace(const CMatrix& a) {
    cplx t = 0.0;
    for (int i = 0; i < a.dim(); ++i) t += a(i, i);
    return t;
}

double frobenius(const CMatrix& a) {
    double s = 0.0;
    for (const cplx& v : a.data()) s += std::norm(v);
    return std::sqrt(s);
}

double max_entry_dist(const CMatrix& a, const CMatrix& b) {
    if (a.dim() != b.dim()) throw DomainError("max_entry_dist: dimension mismatch");
    double m = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k)
        m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
    return m;
}

double delta2(const CMatrix& u, const CMatrix& v) {
    if (u.dim() != v.dim()) throw DomainError("delta2: dimension mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < u.data().size(); ++k) s += std::norm(u.data()[k] - v.data()[k]);
    return std::sqrt(s / static_cast<double>(u.dim()));
}

namespace {

// y = a x
void matvec(const CMatrix& a, const std::vector<cplx>& x, std::vector<cplx>& y) {
    const int d = a.dim();
    for (int i = 0; i < d; ++i) {
        cplx s = 0.0;
        for (int j = 0; j < d; ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
}

// y = a* x
void matvec_adj(const CMatrix& a, const std::vector<cplx>& x, std::vector<cplx>& y) {
    const int d = a.dim();
    for (int j = 0; j < d; ++j) y[j] = 0.0;
    for (int i = 0; i < d; ++i) {
        const cplx xi = x[i];
        for (int j = 0; j < d; ++j) y[j] += std::conj(a(i, j)) * xi;
    }
}

double norm2(const std::vector<cplx>& x) {
    double s = 0.0;
    for (const cplx& v : x) s += std::norm(v);
    return std::sqrt(s);
}

}  // namespace

namespace {

cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

}  // namespace

// Block-2 power iteration with Rayleigh-Ritz extraction on a*a. The second
// basis vector keeps the value accurate when the top two singular values
// cluster, where single-vector iteration stalls below any useful tolerance.
double op_norm(const CMatrix& a) {
    const int d = a.dim();
    if (d == 0) return 0.0;
    const double fro = frobenius(a);
    if (fro == 0.0) return 0.0;
    if (d == 1) return std::abs(a(0, 0));

    std::vector<cplx> x1(d, cplx(1.0 / std::sqrt(static_cast<double>(d)), 0.0));
    std::vector<cplx> x2(d, cplx(0.0, 0.0));
    x2[0] = 1.0;
    std::vector<cplx> t(d), y1(d), y2(d);
    auto bmul = [&](const std::vector<cplx>& x, std::vector<cplx>& y) {
        matvec(a, x, t);
        matvec_adj(a, t, y);  // y = a* a x
    };
    auto orthonormalize = [&](int seed_hint) {
        const double n1 = norm2(x1);
        if (n1 <= 1e-300) {
            std::fill(x1.begin(), x1.end(), cplx(0.0, 0.0));
            x1[seed_hint % d] = 1.0;
        } else {
            for (auto& v : x1) v /= n1;
        }
        const cplx proj = dot(x1, x2);
        for (int i = 0; i < d; ++i) x2[i] -= proj * x1[i];
        const double n2 = norm2(x2);
        if (n2 <= 1e-12) {
            std::fill(x2.begin(), x2.end(), cplx(0.0, 0.0));
            x2[(seed_hint + 1) % d] = 1.0;
            const cplx p2 = dot(x1, x2);
            for (int i = 0; i < d; ++i) x2[i] -= p2 * x1[i];
            const double n3 = norm2(x2);
            if (n3 > 1e-300)
                for (auto& v : x2) v /= n3;
        } else {
            for (auto& v : x2) v /= n2;
        }
    };
    orthonormalize(0);

    const int cap = 10 * d + 100;
    double rho_prev = -1.0, rho = 0.0;
    for (int it = 0; it < cap; ++it) {
        bmul(x1, y1);
        bmul(x2, y2);
        // Rayleigh-Ritz on span{x1, x2}
        const double h11 = dot(x1, y1).real();
        const double h22 = dot(x2, y2).real();
        const cplx h12 = dot(x1, y2);
        const double mid = 0.5 * (h11 + h22), gap = 0.5 * (h11 - h22);
        const double disc = std::sqrt(gap * gap + std::norm(h12));
        rho = mid + disc;
        // Ritz vector for rho and its residual ||B v - rho v||
        cplx alpha, beta;
        if (std::abs(h12) > 1e-300) {
            alpha = h12;
            beta = cplx(rho - h11, 0.0);
        } else {
            alpha = h11 >= h22 ? 1.0 : 0.0;
            beta = h11 >= h22 ? 0.0 : 1.0;
        }
        const double nv = std::sqrt(std::norm(alpha) + std::norm(beta));
        alpha /= nv;
        beta /= nv;
        double res2 = 0.0;
        for (int i = 0; i < d; ++i) {
            const cplx r = alpha * y1[i] + beta * y2[i] - rho * (alpha * x1[i] + beta * x2[i]);
            res2 += std::norm(r);
        }
        const bool rho_settled = rho_prev >= 0.0 && std::abs(rho - rho_prev) <= 1e-10 * rho;
        const bool small_residual = std::sqrt(res2) <= 1e-9 * std::max(rho, 1e-300);
        if (rho > 0.0 && (rho_settled || small_residual)) return std::sqrt(rho);
        rho_prev = rho;
        x1.swap(y1);
        x2.swap(y2);
        orthonormalize(it + 1);
    }
    throw NumericError("op_norm: power iteration did not converge", std::sqrt(rho));
}

double delta_inf(const CMatrix& u, const CMatrix& v) {
    if (u.dim() != v.dim()) throw DomainError("delta_inf: dimension mismatch");
    return op_norm(u - v);
}

double scaled_frobenius(const CMatrix& a) {
    const double f = frobenius(a);
    return f / std::pow(static_cast<double>(std::max(a.dim(), 1)), 0.25);
}

UnitaryMatrix::UnitaryMatrix(CMatrix m) : m_(std::move(m)) {
    const int d = m_.dim();
    if (d == 0) throw DomainError("UnitaryMatrix: empty matrix");
    if (!m_.all_finite()) throw DomainError("UnitaryMatrix: non-finite entries");
    const CMatrix q = m_.adjoint() * m_;
    double worst = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            worst = std::max(worst, std::abs(q(i, j) - (i == j ? cplx(1.0, 0.0) : cplx(0.0, 0.0))));
    if (worst > kUnitaryTol) throw DomainError("UnitaryMatrix: u*u deviates from identity");
}

}  // namespace uglab::matcore
