#pragma once

// Exact and high-precision arithmetic shared by every other module.
//
// Natural and Rational are GMP integers/rationals (always canonical, never
// overflow). Real wraps an MPFR value whose precision is chosen from a count
// of decimal digits; every operation rounds to nearest, so identical inputs
// yield bit-identical results.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>
#include <mpfr.h>

#include "buchstab/errors.hpp"

namespace buchstab {

using Natural = mpz_class;
using Rational = mpq_class;

// Working precision in decimal digits.
struct PrecisionConfig {
  int digits = 30;

  // Throws std::invalid_argument unless digits >= 10.
  void validate() const;
};

// Number of mantissa bits used for a precision of `digits` decimal digits.
mpfr_prec_t bits_for_digits(int digits);

class Real {
 public:
  // Zero at `digits` decimal digits.
  explicit Real(int digits = PrecisionConfig{}.digits);
  Real(long value, int digits);
  Real(const Rational& q, int digits);

  // Parses a decimal literal ("1.5", "-2e-3", "0.5"); throws DomainError on
  // malformed input.
  static Real parse(std::string_view text, int digits);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  int digits() const { return digits_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_ptr get() { return value_; }

  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);
  Real& operator+=(long rhs);
  Real& operator-=(long rhs);
  Real& operator*=(long rhs);
  Real& operator/=(long rhs);

  Real operator-() const;

  friend Real operator+(Real lhs, const Real& rhs) { return lhs += rhs; }
  friend Real operator-(Real lhs, const Real& rhs) { return lhs -= rhs; }
  friend Real operator*(Real lhs, const Real& rhs) { return lhs *= rhs; }
  friend Real operator/(Real lhs, const Real& rhs) { return lhs /= rhs; }
  friend Real operator+(Real lhs, long rhs) { return lhs += rhs; }
  friend Real operator-(Real lhs, long rhs) { return lhs -= rhs; }
  friend Real operator*(Real lhs, long rhs) { return lhs *= rhs; }
  friend Real operator/(Real lhs, long rhs) { return lhs /= rhs; }

  friend bool operator==(const Real& a, const Real& b);
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);

  bool is_zero() const;
  int sign() const;
  double to_double() const;

  // Fixed-point rendering rounded to `significant` significant digits
  // (scientific notation only for very large or very small magnitudes).
  std::string to_string(int significant = 6) const;

  // Shortest decimal string that reads back bit-identically at this
  // precision; used by the artifact store.
  std::string to_exact_string() const;

  // True when both values have the same precision and the same bits.
  bool identical(const Real& other) const;

 private:
  void widen_to(const Real& other);

  int digits_;
  mpfr_t value_;
};

Real abs(Real x);
Real exp(const Real& x);
Real pow(const Real& base, long exponent);

// n! exactly.
Natural factorial(unsigned long n);

// Natural logarithm to the precision of x; DomainError for x <= 0.
Real ln_real(const Real& x);

// e^{-gamma} at `digits` precision from a stored 50-digit literal of Euler's
// constant; PrecisionError for digits > 50.
Real exp_neg_gamma(int digits);

// Correctly rounded conversion.
Real rational_to_real(const Rational& q, int digits);

// Decimal rendering of an exact rational as "p/q" (or "p" when q == 1).
std::string rational_to_string(const Rational& q);

}  // namespace buchstab
