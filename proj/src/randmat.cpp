#include "uglab/randmat.hpp"

#include <cmath>
#include <vector>

#include "uglab/error.hpp"

namespace uglab::randmat {

using matcore::CMatrix;
using matcore::cplx;

CMatrix gaussian_matrix(int d, SeededRng& rng) {
    if (d < 1) throw DomainError("gaussian_matrix: d must be >= 1");
    CMatrix m(d);
    const double scale = 1.0 / std::sqrt(2.0 * d);  // E|entry|^2 = 1/d
    for (auto& v : m.data()) {
        const auto [re, im] = rng.gaussian_pair();
        v = cplx(re * scale, im * scale);
    }
    return m;
}

namespace {

// Householder QR in place; returns the R diagonal. q accumulates the product
// of reflectors so that (original a) = q * r.
std::vector<cplx> householder_qr(CMatrix& a, CMatrix& q) {
    const int d = a.dim();
    q = CMatrix::identity(d);
    std::vector<cplx> v(d);
    for (int k = 0; k < d; ++k) {
        double xnorm = 0.0;
        for (int i = k; i < d; ++i) xnorm += std::norm(a(i, k));
        xnorm = std::sqrt(xnorm);
        if (xnorm == 0.0) continue;
        const cplx x0 = a(k, k);
        const double ax0 = std::abs(x0);
        const cplx phase = ax0 > 0 ? x0 / ax0 : cplx(1.0, 0.0);
        const cplx alpha = -phase * xnorm;
        double vnorm2 = 0.0;
        for (int i = k; i < d; ++i) {
            v[i] = a(i, k) - (i == k ? alpha : cplx(0.0, 0.0));
            vnorm2 += std::norm(v[i]);
        }
        if (vnorm2 == 0.0) continue;
        const double tau = 2.0 / vnorm2;
        // a <- H a with H = I - tau v v*
        for (int j = k; j < d; ++j) {
            cplx s = 0.0;
            for (int i = k; i < d; ++i) s += std::conj(v[i]) * a(i, j);
            s *= tau;
            for (int i = k; i < d; ++i) a(i, j) -= s * v[i];
        }
        // q <- q H (accumulates q = H_1 ... H_k)
        for (int i = 0; i < d; ++i) {
            cplx s = 0.0;
            for (int j = k; j < d; ++j) s += q(i, j) * v[j];
            s *= tau;
            for (int j = k; j < d; ++j) q(i, j) -= s * std::conj(v[j]);
        }
    }
    std::vector<cplx> rdiag(d);
    for (int k = 0; k < d; ++k) rdiag[k] = a(k, k);
    return rdiag;
}

}  // namespace

matcore::UnitaryMatrix haar_unitary(int d, SeededRng& rng) {
    if (d < 1) throw DomainError("haar_unitary: d must be >= 1");
    for (int attempt = 0; attempt < 3; ++attempt) {
        CMatrix a = gaussian_matrix(d, rng);
        CMatrix q;
        const std::vector<cplx> rdiag = householder_qr(a, q);
        bool degenerate = false;
        for (const cplx& r : rdiag)
            if (std::abs(r) < 1e-300) degenerate = true;
        if (degenerate) continue;  // resample; probability ~ 0
        // Column k scaled by r_kk/|r_kk| gives the factor with positive R
        // diagonal, which is the Haar-distributed one.
        for (int k = 0; k < d; ++k) {
            const cplx lambda = rdiag[k] / std::abs(rdiag[k]);
            for (int i = 0; i < d; ++i) q(i, k) *= lambda;
        }
        return matcore::UnitaryMatrix(std::move(q));
    }
    throw NumericError("haar_unitary: degenerate QR after 3 attempts");
}

McEstimate op_norm_estimate(int d, long n_samples, const SeededRng& base, int threads) {
    if (n_samples < 2) throw DomainError("op_norm_estimate: need n_samples >= 2");
    std::vector<double> vals(static_cast<std::size_t>(n_samples));
    parallel_for(static_cast<std::size_t>(n_samples), threads, [&](std::size_t i) {
        SeededRng r = base.substream(i);
        vals[i] = matcore::op_norm(gaussian_matrix(d, r));
    });
    return summarize(vals, base.seed);
}

}  // namespace uglab::randmat
