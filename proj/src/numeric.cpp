#include "buchstab/numeric.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace buchstab {

namespace {

constexpr const char* kEulerGamma50 = "0.57721566490153286060651209008240243104215933593992";
constexpr int kEulerGammaDigits = 50;

// mpfr_get_str wrapper returning the digit string and the decimal exponent
// such that value = 0.DIGITS * 10^exponent.
std::string mantissa_digits(mpfr_srcptr x, std::size_t count, mpfr_exp_t& exponent) {
  char* raw = mpfr_get_str(nullptr, &exponent, 10, count, x, MPFR_RNDN);
  std::string digits(raw);
  mpfr_free_str(raw);
  return digits;
}

}  // namespace

void PrecisionConfig::validate() const {
  if (digits < 10) {
    throw std::invalid_argument("precision must be at least 10 decimal digits, got " +
                                std::to_string(digits));
  }
}

mpfr_prec_t bits_for_digits(int digits) {
  if (digits < 1) throw std::invalid_argument("precision must be positive");
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.321928094887362)) + 2;
}

Real::Real(int digits) : digits_(digits) {
  mpfr_init2(value_, bits_for_digits(digits));
  mpfr_set_zero(value_, 1);
}

Real::Real(long value, int digits) : digits_(digits) {
  mpfr_init2(value_, bits_for_digits(digits));
  mpfr_set_si(value_, value, MPFR_RNDN);
}

Real::Real(const Rational& q, int digits) : digits_(digits) {
  mpfr_init2(value_, bits_for_digits(digits));
  mpfr_set_q(value_, q.get_mpq_t(), MPFR_RNDN);
}

Real Real::parse(std::string_view text, int digits) {
  Real r(digits);
  std::string buffer(text);
  if (buffer.empty()) throw DomainError("empty decimal literal");
  char* end = nullptr;
  mpfr_strtofr(r.value_, buffer.c_str(), &end, 10, MPFR_RNDN);
  if (end == buffer.c_str() || *end != '\0' || !mpfr_number_p(r.value_)) {
    throw DomainError("not a decimal number: '" + buffer + "'");
  }
  return r;
}

Real::Real(const Real& other) : digits_(other.digits_) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept : digits_(other.digits_) {
  // MPFR has no move; swap into a fresh minimal value.
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    digits_ = other.digits_;
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this != &other) {
    digits_ = other.digits_;
    mpfr_swap(value_, other.value_);
  }
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

void Real::widen_to(const Real& other) {
  if (other.digits_ > digits_) {
    digits_ = other.digits_;
    mpfr_prec_round(value_, mpfr_get_prec(other.value_), MPFR_RNDN);
  }
}

Real& Real::operator+=(const Real& rhs) {
  widen_to(rhs);
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator-=(const Real& rhs) {
  widen_to(rhs);
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator*=(const Real& rhs) {
  widen_to(rhs);
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator/=(const Real& rhs) {
  widen_to(rhs);
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator+=(long rhs) {
  mpfr_add_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

Real& Real::operator-=(long rhs) {
  mpfr_sub_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

Real& Real::operator*=(long rhs) {
  mpfr_mul_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

Real& Real::operator/=(long rhs) {
  mpfr_div_si(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

Real Real::operator-() const {
  Real r(*this);
  mpfr_neg(r.value_, r.value_, MPFR_RNDN);
  return r;
}

bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

bool Real::is_zero() const { return mpfr_zero_p(value_) != 0; }

int Real::sign() const { return mpfr_sgn(value_); }

double Real::to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

std::string Real::to_string(int significant) const {
  if (significant < 1) significant = 1;
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return mpfr_sgn(value_) < 0 ? "-inf" : "inf";
  if (mpfr_zero_p(value_)) {
    return significant == 1 ? std::string("0") : "0." + std::string(significant - 1, '0');
  }

  mpfr_exp_t exponent = 0;
  std::string digits = mantissa_digits(value_, static_cast<std::size_t>(significant), exponent);
  std::string sign;
  if (digits.front() == '-') {
    sign = "-";
    digits.erase(0, 1);
  }

  if (exponent > 30 || exponent < -30) {
    std::string out = sign + digits.substr(0, 1);
    if (digits.size() > 1) out += "." + digits.substr(1);
    return out + "e" + std::to_string(exponent - 1);
  }
  if (exponent <= 0) {
    return sign + "0." + std::string(static_cast<std::size_t>(-exponent), '0') + digits;
  }
  const auto whole = static_cast<std::size_t>(exponent);
  if (whole >= digits.size()) {
    return sign + digits + std::string(whole - digits.size(), '0');
  }
  return sign + digits.substr(0, whole) + "." + digits.substr(whole);
}

std::string Real::to_exact_string() const {
  if (mpfr_zero_p(value_)) return mpfr_signbit(value_) ? "-0" : "0";
  mpfr_exp_t exponent = 0;
  const std::size_t count = mpfr_get_str_ndigits(10, mpfr_get_prec(value_));
  std::string digits = mantissa_digits(value_, count, exponent);
  std::string sign;
  if (digits.front() == '-') {
    sign = "-";
    digits.erase(0, 1);
  }
  return sign + digits.substr(0, 1) + "." + digits.substr(1) + "e" + std::to_string(exponent - 1);
}

bool Real::identical(const Real& other) const {
  if (mpfr_get_prec(value_) != mpfr_get_prec(other.value_)) return false;
  if (mpfr_signbit(value_) != mpfr_signbit(other.value_)) return false;
  return mpfr_equal_p(value_, other.value_) != 0 ||
         (mpfr_nan_p(value_) && mpfr_nan_p(other.value_));
}

Real abs(Real x) {
  mpfr_abs(x.get(), x.get(), MPFR_RNDN);
  return x;
}

Real exp(const Real& x) {
  Real r(x.digits());
  mpfr_exp(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real pow(const Real& base, long exponent) {
  Real r(base.digits());
  mpfr_pow_si(r.get(), base.get(), exponent, MPFR_RNDN);
  return r;
}

Natural factorial(unsigned long n) {
  Natural result;
  mpz_fac_ui(result.get_mpz_t(), n);
  return result;
}

Real ln_real(const Real& x) {
  if (x.sign() <= 0) {
    throw DomainError("ln of non-positive value " + x.to_string(10));
  }
  Real r(x.digits());
  mpfr_log(r.get(), x.get(), MPFR_RNDN);
  return r;
}

Real exp_neg_gamma(int digits) {
  if (digits > kEulerGammaDigits) {
    throw PrecisionError("e^{-gamma} is available to at most 50 digits, requested " +
                         std::to_string(digits));
  }
  // Guard digits so that the final rounding dominates the error.
  Real gamma = Real::parse(kEulerGamma50, kEulerGammaDigits + 10);
  Real wide = exp(-gamma);
  Real out(digits);
  mpfr_set(out.get(), wide.get(), MPFR_RNDN);
  return out;
}

Real rational_to_real(const Rational& q, int digits) { return Real(q, digits); }

std::string rational_to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace buchstab
