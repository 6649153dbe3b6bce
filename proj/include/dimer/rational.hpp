#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <boost/multiprecision/mpfr.hpp>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace dimer {

using Int = mpz_class;
using Rat = mpq_class;

/// Arbitrary-precision real, used only for logarithms and reporting.
/// Coefficient arithmetic never leaves Rat.
using Real = boost::multiprecision::mpfr_float;

/// Raises the (thread-local) working precision to at least `digits`
/// significant decimal digits, never below 50.
inline unsigned ensure_real_precision(unsigned digits = 50) {
  unsigned want = std::max(digits, 50u);
  if (Real::default_precision() < want) Real::default_precision(want);
  return Real::default_precision();
}

inline Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline Rat make_rat(long num, long den) { return make_rat(Int(num), Int(den)); }

/// Canonical "p/q" form: gcd(p,q) = 1, q > 0. The denominator is always
/// printed, so "0/1" and "3/1" are valid outputs.
inline std::string rat_str(const Rat& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Accepts "p/q", a plain integer, or a terminating decimal such as "0.25".
inline Rat parse_rat(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    return make_rat(num, den);
  }
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    size_t frac_len = s.size() - dot - 1;
    if (digits.empty() || frac_len == 0)
      throw std::invalid_argument("bad decimal literal: " + s);
    Int den = 1;
    for (size_t i = 0; i < frac_len; ++i) den *= 10;
    return make_rat(Int(digits), den);
  }
  return make_rat(Int(s), Int(1));
}

inline Real to_real(const Rat& q) {
  ensure_real_precision();
  return Real(q.get_mpq_t());
}

inline Real to_real(const Int& n) {
  ensure_real_precision();
  return Real(n.get_mpz_t());
}

inline Int factorial(unsigned long n) {
  Int r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

inline Int int_pow(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Rat rat_pow(const Rat& base, unsigned long e) {
  Rat r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num().get_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den().get_mpz_t(), e);
  return r;  // canonical since base was
}

/// Decimal string with `digits` significant digits, deterministic across runs.
inline std::string real_str(const Real& x, unsigned digits = 50) {
  return x.str(digits);
}

}  // namespace dimer
