#include "uglab/rational.hpp"

#include <cmath>

#include "uglab/error.hpp"

namespace uglab {

BigInt factorial(unsigned long n) {
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

BigInt binomial(unsigned long n, unsigned long k) {
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

BigInt pow2(unsigned long n) {
    BigInt r = 1;
    mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), n);
    return r;
}

BigInt floor_rat(const BigRat& q) {
    BigInt r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return r;
}

BigInt ceil_rat(const BigRat& q) {
    BigInt r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return r;
}

double log_bigint(const BigInt& n) {
    if (n <= 0) throw DomainError("log_bigint: argument must be positive");
    signed long exp = 0;
    double m = mpz_get_d_2exp(&exp, n.get_mpz_t());  // n = m * 2^exp, m in [0.5,1)
    return std::log(m) + static_cast<double>(exp) * std::log(2.0);
}

double log_rat(const BigRat& q) {
    if (q <= 0) throw DomainError("log_rat: argument must be positive");
    return log_bigint(BigInt(q.get_num())) - log_bigint(BigInt(q.get_den()));
}

BigRat rat_from_double(double x) {
    if (!std::isfinite(x)) throw DomainError("rat_from_double: non-finite value");
    BigRat q;
    mpq_set_d(q.get_mpq_t(), x);
    q.canonicalize();
    return q;
}

std::string rat_to_string(const BigRat& q) {
    return q.get_str();
}

}  // namespace uglab
