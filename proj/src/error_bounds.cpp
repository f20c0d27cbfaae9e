#include "mpps/error_bounds.hpp"

#include <cmath>
#include <string>

#include "mpps/errors.hpp"

namespace mpps {

namespace {

mpfr_prec_t bound_bits() { return bound_context().bits(); }

Real at_bound(const Real& x) { return x.rounded(bound_bits()); }

}  // namespace

const PrecisionCtx& bound_context() {
  static const PrecisionCtx ctx(32);
  return ctx;
}

Real gamma(const Real& k, const Real& u) {
  const Real one(1L, bound_bits());
  const Real ku = at_bound(k) * at_bound(u);
  if (ku >= one) {
    throw BoundInvalid("gamma_k invalid: k*u = " + ku.to_string(6) + " >= 1");
  }
  if (k.sign() < 0) throw BoundInvalid("gamma_k needs k >= 0");
  return ku / (one - ku);
}

Real gamma(double k, const Real& u) { return gamma(Real(k, bound_bits()), u); }

std::vector<Real> f_constants_closed(int n, std::span<const Real> ladder) {
  if (ladder.empty()) throw InvalidArgument("f-constants need at least one precision");
  const mpfr_prec_t bits = bound_bits();
  const Real base = at_bound(ladder[0]);
  const Real n1(static_cast<long>(n) + 1, bits);
  const Real n2(static_cast<long>(n) + 2, bits);
  const Real one(1L, bits);
  std::vector<Real> f;
  f.reserve(ladder.size());
  f.emplace_back(2L, bits);
  Real inner_sum(bits);  // u_nu + ... + u_{i-1}
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    f.push_back(n2 * (at_bound(ladder[i]) / base) + n1 * (inner_sum / base) + one);
    inner_sum = inner_sum + at_bound(ladder[i]);
  }
  return f;
}

std::vector<Real> f_constants_recurrence(int n, std::span<const Real> ladder) {
  if (ladder.empty()) throw InvalidArgument("f-constants need at least one precision");
  const mpfr_prec_t bits = bound_bits();
  const std::size_t top = ladder.size() - 1;
  const Real nn(static_cast<long>(n), bits);
  const Real one(1L, bits);
  // level[j - b] holds f_{b,j} for the current base level b.
  std::vector<Real> level{Real(2L, bits)};
  for (std::size_t b = top; b-- > 0;) {
    const Real theta = at_bound(ladder[b + 1]) / at_bound(ladder[b]);
    std::vector<Real> next;
    next.reserve(level.size() + 1);
    next.emplace_back(2L, bits);
    for (const auto& f_above : level) next.push_back(theta * (nn + f_above) + one);
    level = std::move(next);
  }
  return level;
}

Real thm21_bound(const BoundInputs& in) {
  if (in.precisions.empty() || in.precisions.size() != in.norm_B.size()) {
    throw InvalidArgument("thm21_bound: need one precision per coefficient block");
  }
  const auto f = f_constants_closed(in.n, in.precisions);
  const mpfr_prec_t bits = bound_bits();
  Real total(bits);
  Real y_power(1L, bits);
  const Real norm_y = at_bound(in.norm_Y);
  for (std::size_t k = 0; k < f.size(); ++k) {
    total = total + gamma(f[k], in.precisions[0]) * y_power * at_bound(in.norm_B[k]);
    y_power = y_power * norm_y;
  }
  return total;
}

Real power_error_bound(int n, int t, const Real& u) {
  if (t < 1) throw InvalidArgument("power_error_bound: t must be >= 1");
  return gamma(static_cast<double>(t - 1) * n, u);
}

Real assembly_error_bound(std::span<const Real> abs_coeffs,
                          std::span<const Real> abs_power_norms, int n, int s,
                          const Real& u) {
  if (s < 1 || abs_coeffs.size() < static_cast<std::size_t>(s) ||
      abs_power_norms.size() < static_cast<std::size_t>(s)) {
    throw InvalidArgument("assembly_error_bound: need s coefficients and s power norms");
  }
  if (s == 1) return assembly_error_bound_fine(abs_coeffs, abs_power_norms, n, s, u);
  const mpfr_prec_t bits = bound_bits();
  Real weighted(bits);
  for (int j = 0; j < s; ++j) {
    weighted = weighted + at_bound(abs_coeffs[j]) * at_bound(abs_power_norms[j]);
  }
  return gamma(static_cast<double>(s - 2) * n + 2, u) * weighted;
}

Real assembly_error_bound_fine(std::span<const Real> abs_coeffs,
                               std::span<const Real> abs_power_norms, int n, int s,
                               const Real& u) {
  if (s < 1 || abs_coeffs.size() < static_cast<std::size_t>(s) ||
      abs_power_norms.size() < static_cast<std::size_t>(s)) {
    throw InvalidArgument("assembly_error_bound: need s coefficients and s power norms");
  }
  const int t = s - 1;
  Real total = gamma(static_cast<double>(t), u) * at_bound(abs_coeffs[0]) *
               at_bound(abs_power_norms[0]);
  for (int j = 1; j < s; ++j) {
    const double k = static_cast<double>(j - 1) * (n - 1) + t + 1;
    total = total + gamma(k, u) * at_bound(abs_coeffs[j]) * at_bound(abs_power_norms[j]);
  }
  return total;
}

TauSequence tau_sequence(std::span<const Real> norm_B, const Real& norm_Y) {
  TauSequence out;
  const mpfr_prec_t bits = bound_bits();
  for (std::size_t i = 1; i < norm_B.size(); ++i) {
    if (norm_B[i - 1].is_zero()) {
      out.tau.push_back(Real::infinity(bits));
      out.flagged.push_back(true);
    } else {
      out.tau.push_back(at_bound(norm_B[i]) * at_bound(norm_Y) / at_bound(norm_B[i - 1]));
      out.flagged.push_back(false);
    }
  }
  return out;
}

Real gamma_si(int s, int i, const Real& sigma) {
  const PrecisionCtx ctx(64);
  const mpfr_prec_t bits = ctx.bits();
  if (s < 1 || i < 2) throw InvalidArgument("gamma_si: need s >= 1 and i >= 2");
  const Real sig = sigma.rounded(bits);
  // The s/e limit is compared at the caller's precision so that s/e computed
  // there is accepted.
  const mpfr_prec_t in_bits = sigma.bits();
  if (sig.sign() < 0 || sigma > Real(static_cast<long>(s), in_bits) / euler_e(in_bits)) {
    throw InvalidArgument("gamma_si: sigma must lie in [0, s/e]");
  }
  auto fact = [bits](long k) {
    Real out(bits);
    mpfr_fac_ui(out.get(), static_cast<unsigned long>(k), MPFR_RNDN);
    return out;
  };
  const long is = static_cast<long>(i) * s;
  const long prev = static_cast<long>(i - 1) * s;

  // numerator: s!/(is)! * (1 + sigma/(is+1) + ... + (sigma/(is+1))^{s-1})
  const Real ratio_num = sig / Real(is + 1, bits);
  Real geo_num(bits);
  Real term(1L, bits);
  for (int k = 0; k < s; ++k) {
    geo_num = geo_num + term;
    term = term * ratio_num;
  }
  const Real numerator = fact(s) / fact(is) * geo_num;

  // denominator: 1/((i-1)s)! - sigma/((i-1)s+1)! * sum_{k<s-1} (sigma/((i-1)s+2))^k
  const Real ratio_den = sig / Real(prev + 2, bits);
  Real geo_den(bits);
  term = Real(1L, bits);
  for (int k = 0; k < s - 1; ++k) {
    geo_den = geo_den + term;
    term = term * ratio_den;
  }
  const Real denominator =
      Real(1L, bits) / fact(prev) - sig / fact(prev + 1) * geo_den;
  return numerator / denominator;
}

AlphaResult alpha_m(const MPMatrix& x, int m) {
  if (m < 1) throw InvalidArgument("alpha_m: m must be >= 1");
  if (!x.is_square()) throw DimensionError("alpha_m: matrix must be square");
  AlphaResult out;
  out.d_star = static_cast<int>(std::floor((1.0 + std::sqrt(4.0 * m + 5.0)) / 2.0));
  // Guard the floor against rounding of sqrt at perfect squares.
  while ((out.d_star + 1) * out.d_star <= m + 1) ++out.d_star;
  while (out.d_star * (out.d_star - 1) > m + 1) --out.d_star;

  const PrecisionCtx ctx(16);
  MPMatrix power = round_to(x, ctx);
  for (int k = 1; k < out.d_star; ++k) power = mat_mul(power, x, ctx);
  const Real norm_d = one_norm(power, ctx);
  const MPMatrix next = mat_mul(power, x, ctx);
  const Real norm_d1 = one_norm(next, ctx);
  const mpfr_prec_t bits = ctx.bits();
  const Real root_d = pow(norm_d, Real(1L, bits) / Real(static_cast<long>(out.d_star), bits));
  const Real root_d1 =
      pow(norm_d1, Real(1L, bits) / Real(static_cast<long>(out.d_star) + 1, bits));
  out.alpha = max(root_d, root_d1);
  return out;
}

int extra_squarings(const Real& norm_x, int s) {
  if (s < 1) throw InvalidArgument("extra_squarings: s must be >= 1");
  if (norm_x.sign() <= 0) throw InvalidArgument("extra_squarings: norm must be positive");
  const mpfr_prec_t bits = 128;
  const Real arg = euler_e(bits) * norm_x.rounded(bits) / Real(static_cast<long>(s), bits);
  const double lg = log2(arg).to_double();
  // Norms arrive rounded to ~16 digits; treat a logarithm within that noise
  // of an integer as the integer.
  const double nearest = std::round(lg);
  const double snapped = std::fabs(lg - nearest) < 1e-12 ? nearest : lg;
  return std::max(0, static_cast<int>(std::ceil(snapped)));
}

HornerDiagnostics horner_diagnostics(int n, int s, const Real& tau_max, const Real& tau_nu,
                                     const Real& norm_B_base, const Real& u_base,
                                     const Real& norm_x, const Real& norm_Y) {
  const mpfr_prec_t bits = bound_bits();
  const Real one(1L, bits);
  const Real nn(static_cast<long>(n), bits);
  HornerDiagnostics out;
  out.small_constant_ratio =
      ((one + at_bound(tau_max)) * nn + Real(2L, bits)) * at_bound(norm_B_base) *
      at_bound(u_base);
  const Real lhs = Real(static_cast<long>(s), bits) * nn * at_bound(tau_nu) *
                   pow(at_bound(norm_x), static_cast<long>(s));
  if (norm_Y.is_zero()) {
    out.y_accuracy_ratio = lhs.is_zero() ? Real(bits) : Real::infinity(bits);
  } else {
    out.y_accuracy_ratio = lhs / at_bound(norm_Y);
  }
  out.y_accuracy_warning = out.y_accuracy_ratio > one;
  return out;
}

}  // namespace mpps
