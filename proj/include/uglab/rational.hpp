// Arbitrary-precision integers and rationals (GMP) plus small helpers used
// by the exact-combinatorics paths.
#pragma once

#include <gmpxx.h>

#include <string>

namespace uglab {

using BigInt = mpz_class;
using BigRat = mpq_class;

BigInt factorial(unsigned long n);
BigInt binomial(unsigned long n, unsigned long k);
BigInt pow2(unsigned long n);

// floor(q) as an integer (works for negative q).
BigInt floor_rat(const BigRat& q);
// ceil(q) as an integer.
BigInt ceil_rat(const BigRat& q);

// Natural log of a positive integer / rational, safe far beyond double range.
double log_bigint(const BigInt& n);
double log_rat(const BigRat& q);

// Exact rational value of a double (every finite double is rational).
BigRat rat_from_double(double x);

std::string rat_to_string(const BigRat& q);

}  // namespace uglab
