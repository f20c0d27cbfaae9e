#include "mpps/real.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "mpps/errors.hpp"

namespace mpps {

Real::Real(mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_zero(value_, 1);
}

Real::Real(double value, mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_d(value_, value, MPFR_RNDN);
}

Real::Real(long value, mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_si(value_, value, MPFR_RNDN);
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.bits());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

// A moved-from Real has a null limb pointer; only destruction and
// assignment are valid on it.
Real::Real(Real&& other) noexcept {
  value_[0] = other.value_[0];
  other.value_[0]._mpfr_d = nullptr;
}

Real& Real::operator=(const Real& other) {
  if (this == &other) return *this;
  if (value_[0]._mpfr_d == nullptr) {
    mpfr_init2(value_, other.bits());
  } else {
    mpfr_set_prec(value_, other.bits());
  }
  mpfr_set(value_, other.value_, MPFR_RNDN);
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this == &other) return *this;
  if (value_[0]._mpfr_d != nullptr) mpfr_clear(value_);
  value_[0] = other.value_[0];
  other.value_[0]._mpfr_d = nullptr;
  return *this;
}

Real::~Real() {
  if (value_[0]._mpfr_d != nullptr) mpfr_clear(value_);
}

Real Real::parse(std::string_view text, mpfr_prec_t bits) {
  std::string buffer(text);
  // Trim surrounding whitespace; mpfr_set_str rejects it.
  const auto first = buffer.find_first_not_of(" \t\r\n");
  const auto last = buffer.find_last_not_of(" \t\r\n");
  if (first == std::string::npos) throw IoError("empty numeric field");
  buffer = buffer.substr(first, last - first + 1);
  Real out(bits);
  if (mpfr_set_str(out.value_, buffer.c_str(), 10, MPFR_RNDN) != 0) {
    throw IoError("not a decimal number: '" + buffer + "'");
  }
  return out;
}

Real Real::pow10(long exponent, mpfr_prec_t bits) {
  Real ten(10L, bits);
  Real out(bits);
  mpfr_pow_si(out.value_, ten.value_, exponent, MPFR_RNDN);
  return out;
}

Real Real::infinity(mpfr_prec_t bits) {
  Real out(bits);
  mpfr_set_inf(out.value_, 1);
  return out;
}

double Real::log10_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  Real tmp(std::max<mpfr_prec_t>(bits(), 64));
  mpfr_abs(tmp.value_, value_, MPFR_RNDN);
  mpfr_log10(tmp.value_, tmp.value_, MPFR_RNDN);
  return tmp.to_double();
}

std::string Real::to_string(int significant) const {
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return mpfr_sgn(value_) > 0 ? "inf" : "-inf";
  significant = std::max(significant, 1);
  const int needed =
      mpfr_snprintf(nullptr, 0, "%.*Re", significant - 1, value_);
  std::vector<char> buffer(static_cast<std::size_t>(needed) + 1);
  mpfr_snprintf(buffer.data(), buffer.size(), "%.*Re", significant - 1, value_);
  return std::string(buffer.data(), static_cast<std::size_t>(needed));
}

Real Real::rounded(mpfr_prec_t target_bits) const {
  Real out(target_bits);
  mpfr_set(out.value_, value_, MPFR_RNDN);
  return out;
}

bool Real::identical(const Real& other) const {
  if (bits() != other.bits()) return false;
  if (mpfr_nan_p(value_) || mpfr_nan_p(other.value_)) {
    return mpfr_nan_p(value_) && mpfr_nan_p(other.value_);
  }
  return mpfr_equal_p(value_, other.value_) != 0 &&
         mpfr_signbit(value_) == mpfr_signbit(other.value_);
}

bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }
bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()) != 0; }

namespace {
mpfr_prec_t wider(const Real& a, const Real& b) { return std::max(a.bits(), b.bits()); }
}  // namespace

Real operator+(const Real& a, const Real& b) {
  Real out(wider(a, b));
  mpfr_add(out.get(), a.get(), b.get(), MPFR_RNDN);
  return out;
}

Real operator-(const Real& a, const Real& b) {
  Real out(wider(a, b));
  mpfr_sub(out.get(), a.get(), b.get(), MPFR_RNDN);
  return out;
}

Real operator*(const Real& a, const Real& b) {
  Real out(wider(a, b));
  mpfr_mul(out.get(), a.get(), b.get(), MPFR_RNDN);
  return out;
}

Real operator/(const Real& a, const Real& b) {
  Real out(wider(a, b));
  mpfr_div(out.get(), a.get(), b.get(), MPFR_RNDN);
  return out;
}

Real operator-(const Real& a) {
  Real out(a.bits());
  mpfr_neg(out.get(), a.get(), MPFR_RNDN);
  return out;
}

Real abs(const Real& a) {
  Real out(a.bits());
  mpfr_abs(out.get(), a.get(), MPFR_RNDN);
  return out;
}

Real max(const Real& a, const Real& b) { return a < b ? b : a; }
Real min(const Real& a, const Real& b) { return b < a ? b : a; }

Real pow(const Real& base, long exponent) {
  Real out(base.bits());
  mpfr_pow_si(out.get(), base.get(), exponent, MPFR_RNDN);
  return out;
}

Real pow(const Real& base, const Real& exponent) {
  Real out(wider(base, exponent));
  mpfr_pow(out.get(), base.get(), exponent.get(), MPFR_RNDN);
  return out;
}

Real sqrt(const Real& a) {
  Real out(a.bits());
  mpfr_sqrt(out.get(), a.get(), MPFR_RNDN);
  return out;
}

Real log10(const Real& a) {
  Real out(a.bits());
  mpfr_log10(out.get(), a.get(), MPFR_RNDN);
  return out;
}

Real log2(const Real& a) {
  Real out(a.bits());
  mpfr_log2(out.get(), a.get(), MPFR_RNDN);
  return out;
}

Real euler_e(mpfr_prec_t bits) {
  Real one(1L, bits);
  Real out(bits);
  mpfr_exp(out.get(), one.get(), MPFR_RNDN);
  return out;
}

}  // namespace mpps
