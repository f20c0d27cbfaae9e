#include "mpps/generators.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "mpps/errors.hpp"

namespace mpps {

namespace {

void require_order(int n) {
  if (n < 1) throw InvalidArgument("matrix order must be >= 1, got " + std::to_string(n));
}

std::vector<Real> zeros(std::size_t count, mpfr_prec_t bits) {
  std::vector<Real> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.emplace_back(bits);
  return out;
}

// 1/q rounded once at `bits`.
Real reciprocal(long q, mpfr_prec_t bits) {
  Real out(bits);
  mpfr_ui_div(out.get(), 1, Real(q, bits).get(), MPFR_RNDN);
  return out;
}

}  // namespace

MPMatrix gen_cauchy(int n, const PrecisionCtx& ctx) {
  require_order(n);
  const auto un = static_cast<std::size_t>(n);
  std::vector<Real> re;
  re.reserve(un * un);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) re.push_back(reciprocal(i + j, ctx.bits()));
  }
  return MPMatrix(un, un, std::move(re), {}, ctx);
}

MPMatrix gen_ward(const PrecisionCtx& ctx) {
  const double a[] = {-131, 19, 18, -390, 56, 54, -387, 57, 52};
  return MPMatrix::from_doubles(3, 3, a, ctx);
}

MPMatrix gen_nonnormal2(const PrecisionCtx& ctx) {
  std::vector<Real> re;
  re.push_back(Real::parse("-0.1", ctx.bits()));
  re.push_back(Real(1000000L, ctx.bits()));
  re.emplace_back(ctx.bits());
  re.push_back(Real::parse("-0.1", ctx.bits()));
  return MPMatrix(2, 2, std::move(re), {}, ctx);
}

std::vector<double> normal_variates(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  auto uniform = [&gen] {
    // (k + 0.5) / 2^53 lies strictly inside (0, 1).
    return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
  };
  std::vector<double> out;
  out.reserve(count + 1);
  while (out.size() < count) {
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    out.push_back(radius * std::cos(angle));
    out.push_back(radius * std::sin(angle));
  }
  out.resize(count);
  return out;
}

MPMatrix gen_triu_rand(int n, double scale, std::uint64_t seed, const PrecisionCtx& ctx) {
  require_order(n);
  const auto un = static_cast<std::size_t>(n);
  const auto z = normal_variates(un * un, seed);
  std::vector<Real> re = zeros(un * un, ctx.bits());
  for (std::size_t i = 0; i < un; ++i) {
    for (std::size_t j = i + 1; j < un; ++j) re[i * un + j] = Real(z[i * un + j] * scale, ctx.bits());
  }
  return MPMatrix(un, un, std::move(re), {}, ctx);
}

MPMatrix gen_lotkin(int n, const PrecisionCtx& ctx) {
  require_order(n);
  const auto un = static_cast<std::size_t>(n);
  std::vector<Real> re;
  re.reserve(un * un);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      re.push_back(i == 1 ? Real(1L, ctx.bits()) : reciprocal(i + j - 1, ctx.bits()));
    }
  }
  return MPMatrix(un, un, std::move(re), {}, ctx);
}

MPMatrix gen_smoke(int n, const PrecisionCtx& ctx) {
  require_order(n);
  const auto un = static_cast<std::size_t>(n);
  const mpfr_prec_t bits = ctx.bits();
  // Angles are formed with guard bits so each root is correctly rounded.
  const mpfr_prec_t guard = bits + 64;
  std::vector<Real> re = zeros(un * un, bits);
  std::vector<Real> im = zeros(un * un, bits);
  Real pi(guard);
  mpfr_const_pi(pi.get(), MPFR_RNDN);
  Real angle(guard);
  for (int k = 1; k <= n; ++k) {
    const auto d = static_cast<std::size_t>(k - 1) * (un + 1);
    mpfr_mul_ui(angle.get(), pi.get(), 2UL * static_cast<unsigned long>(k), MPFR_RNDN);
    mpfr_div_ui(angle.get(), angle.get(), static_cast<unsigned long>(n), MPFR_RNDN);
    mpfr_sin_cos(im[d].get(), re[d].get(), angle.get(), MPFR_RNDN);
  }
  for (std::size_t i = 0; i + 1 < un; ++i) mpfr_set_ui(re[i * un + i + 1].get(), 1, MPFR_RNDN);
  // For n = 1 the corner overwrites the single diagonal entry.
  mpfr_set_ui(re[(un - 1) * un].get(), 1, MPFR_RNDN);
  mpfr_set_zero(im[(un - 1) * un].get(), 1);
  return MPMatrix(un, un, std::move(re), std::move(im), ctx);
}

std::vector<std::string> generator_names() {
  return {"cauchy", "ward", "nonnormal2", "triu_rand", "lotkin", "smoke"};
}

}  // namespace mpps
