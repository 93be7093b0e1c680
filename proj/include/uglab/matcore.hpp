// Dense complex matrices and the metrics used throughout: the normalized
// Hilbert-Schmidt distance delta2, the operator-norm distance delta_inf, and
// the d^{-1/2}-scaled Frobenius norm.
#pragma once

#include <complex>
#include <vector>

namespace uglab::matcore {

using cplx = std::complex<double>;

class CMatrix {
  public:
    CMatrix() = default;
    explicit CMatrix(int d) : dim_(d), a_(static_cast<std::size_t>(d) * d) {}

    static CMatrix identity(int d);

    int dim() const { return dim_; }
    cplx& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
    const cplx& operator()(int i, int j) const {
        return a_[static_cast<std::size_t>(i) * dim_ + j];
    }
    const std::vector<cplx>& data() const { return a_; }
    std::vector<cplx>& data() { return a_; }

    CMatrix operator+(const CMatrix& o) const;
    CMatrix operator-(const CMatrix& o) const;
    CMatrix operator*(const CMatrix& o) const;
    CMatrix operator*(cplx s) const;
    CMatrix adjoint() const;
    bool all_finite() const;

  private:
    int dim_ = 0;
    std::vector<cplx> a_;
};

cplx trace(const CMatrix& a);

// Plain Frobenius norm (sum |a_ij|^2)^{1/2}.
double frobenius(const CMatrix& a);

// Largest entry of |a_ij - b_ij|; cheap lower bound for the operator norm.
double max_entry_dist(const CMatrix& a, const CMatrix& b);

// delta2(u,v) = (d^{-1} tr|u-v|^2)^{1/2}.
double delta2(const CMatrix& u, const CMatrix& v);

// Operator norm by power iteration on a*a (deterministic start vector,
// Rayleigh-quotient convergence to relative tolerance 1e-10, cap 10d+100).
// Throws NumericError carrying the partial value on non-convergence.
double op_norm(const CMatrix& a);

// delta_inf(u,v) = ||u - v|| (operator norm).
double delta_inf(const CMatrix& u, const CMatrix& v);

// (d^{-1/2} tr|a|^2)^{1/2}; note the d^{-1/2} instead of delta2's d^{-1}.
double scaled_frobenius(const CMatrix& a);

class UnitaryMatrix {
  public:
    static constexpr double kUnitaryTol = 1e-9;
    explicit UnitaryMatrix(CMatrix m);  // checks max-entry norm of u*u - I
    const CMatrix& mat() const { return m_; }
    int dim() const { return m_.dim(); }

  private:
    CMatrix m_;
};

}  // namespace uglab::matcore
