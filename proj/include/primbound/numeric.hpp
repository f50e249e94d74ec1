#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace primbound {

/// Unbounded integer used for every antichain / subset count.
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;
/// Exact rational used for densities, weights and telescoped sums.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
/// 50-decimal-digit binary float used for all log-domain arithmetic.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<50>,
                                           boost::multiprecision::et_off>;

inline Real to_real(const Rational& r) { return Real(r); }
inline Real to_real(const BigInt& n) { return Real(n); }

/// Natural log of a positive count.
inline Real log_of(const BigInt& n) { return boost::multiprecision::log(Real(n)); }

inline const Real& ln2() {
  static const Real value = boost::multiprecision::log(Real(2));
  return value;
}

/// `value` rendered with `digits` significant decimal digits.
inline std::string to_significant(const Real& value, int digits) {
  return value.str(digits, std::ios_base::fmtflags(0));
}

inline std::string to_decimal(const BigInt& n) { return n.str(); }

}  // namespace primbound
