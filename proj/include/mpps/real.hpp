#pragma once

#include <mpfr.h>

#include <string>
#include <string_view>

namespace mpps {

// Owning wrapper around an mpfr_t. Every value carries its own binary
// precision; arithmetic helpers round to nearest (ties to even).
class Real {
 public:
  explicit Real(mpfr_prec_t bits = 53);
  Real(double value, mpfr_prec_t bits);
  Real(long value, mpfr_prec_t bits);
  Real(int value, mpfr_prec_t bits) : Real(static_cast<long>(value), bits) {}

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  // Parses a decimal string ("1.25e-3", "-7", "inf") rounded to `bits`.
  static Real parse(std::string_view text, mpfr_prec_t bits);
  // 10^exponent rounded to `bits`.
  static Real pow10(long exponent, mpfr_prec_t bits);
  static Real infinity(mpfr_prec_t bits);

  mpfr_ptr get() noexcept { return value_; }
  mpfr_srcptr get() const noexcept { return value_; }
  mpfr_prec_t bits() const noexcept { return mpfr_get_prec(value_); }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(value_, MPFR_RNDN); }
  // log10(|x|); -inf for zero.
  double log10_abs() const;

  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }

  // Scientific notation with `significant` significant digits.
  std::string to_string(int significant) const;

  // Same value rounded to a different precision.
  Real rounded(mpfr_prec_t bits) const;

  // Bitwise equality: same precision, same value, same sign of zero.
  bool identical(const Real& other) const;

 private:
  mpfr_t value_;
};

bool operator==(const Real& a, const Real& b);
bool operator<(const Real& a, const Real& b);
bool operator<=(const Real& a, const Real& b);
inline bool operator>(const Real& a, const Real& b) { return b < a; }
inline bool operator>=(const Real& a, const Real& b) { return b <= a; }
inline bool operator!=(const Real& a, const Real& b) { return !(a == b); }

// Binary operators round to the larger of the operand precisions.
Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator-(const Real& a);

Real abs(const Real& a);
Real max(const Real& a, const Real& b);
Real min(const Real& a, const Real& b);
Real pow(const Real& base, long exponent);
Real pow(const Real& base, const Real& exponent);
Real sqrt(const Real& a);
Real log10(const Real& a);
Real log2(const Real& a);
// Euler's number at `bits`.
Real euler_e(mpfr_prec_t bits);

}  // namespace mpps
