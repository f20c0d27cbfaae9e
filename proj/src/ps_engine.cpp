#include "mpps/ps_engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "mpps/errors.hpp"

namespace mpps {

namespace {

using Clock = std::chrono::steady_clock;

class Stopwatch {
 public:
  explicit Stopwatch(double& sink) : sink_(sink), start_(Clock::now()) {}
  ~Stopwatch() { sink_ += std::chrono::duration<double>(Clock::now() - start_).count(); }
  Stopwatch(const Stopwatch&) = delete;
  Stopwatch& operator=(const Stopwatch&) = delete;

 private:
  double& sink_;
  Clock::time_point start_;
};

void require_square(const MPMatrix& x, const char* op) {
  if (!x.is_square()) throw DimensionError(std::string(op) + ": matrix must be square");
}

// powers[j] = fl(X^j), j = 0..s, by repeated right multiplication.
std::vector<MPMatrix> form_powers(const MPMatrix& x, int s, const PrecisionCtx& ctx) {
  std::vector<MPMatrix> powers;
  powers.reserve(static_cast<std::size_t>(s) + 1);
  powers.push_back(MPMatrix::identity(x.rows(), ctx));
  if (s >= 1) powers.push_back(round_to(x, ctx));
  for (int j = 2; j <= s; ++j) powers.push_back(mat_mul(powers.back(), x, ctx));
  return powers;
}

// sum_{j<len} b_{first+j} X^j, terms added in index order.
MPMatrix accumulate_block(std::span<const MPMatrix> powers, const CoefficientSeries& series,
                          int first, int len, const PrecisionCtx& ctx) {
  const std::size_t n = powers[0].rows();
  MPMatrix acc = scalar_identity(eval_coeff(series[first], ctx), n, ctx);
  for (int j = 1; j < len; ++j) {
    acc = mat_axpy(eval_coeff(series[first + j], ctx), powers[j], acc, ctx);
  }
  return acc;
}

Real zero_real() { return Real(bound_context().bits()); }

void finish_timing(TimingBuckets& t, Clock::time_point start) {
  t.total_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  const double sum = t.power + t.norm_estimation + t.mixed_horner + t.coefficient_assembly;
  if (sum > 0.0) {
    t.power /= sum;
    t.norm_estimation /= sum;
    t.mixed_horner /= sum;
    t.coefficient_assembly /= sum;
  }
}

EvaluationPlan working_plan(int m, int s, int r, const PrecisionCtx& ctx) {
  EvaluationPlan plan;
  plan.m = m;
  plan.s = s;
  plan.r = r;
  plan.nu = r + 1;
  plan.working_digits = ctx.digits();
  plan.level_digits.assign(static_cast<std::size_t>(r), ctx.digits());
  return plan;
}

struct Blocks {
  std::vector<MPMatrix> powers;
  std::vector<MPMatrix> b;  // B_0..B_r
};

void assemble_rest(Blocks& blocks, const CoefficientSeries& series, int s, int r,
                   const PrecisionCtx& ctx) {
  for (int i = 1; i <= r; ++i) {
    blocks.b.push_back(assemble_block(blocks.powers, series, s, i, ctx));
  }
}

std::vector<Real> block_norms(const Blocks& blocks) {
  std::vector<Real> out;
  out.reserve(blocks.b.size());
  for (const auto& b : blocks.b) out.push_back(one_norm(b));
  return out;
}

void add_matmuls(std::map<int, int>& counts, int digits, int how_many) {
  if (how_many > 0) counts[digits] += how_many;
}

// Horner (or the explicit-powers sum when s = m) over finished blocks.
MPMatrix combine(const Blocks& blocks, const EvaluationPlan& plan, const PrecisionCtx& ctx,
                 std::map<int, int>& counts) {
  const MPMatrix& y = blocks.powers[static_cast<std::size_t>(plan.s)];
  if (plan.r == 0) return blocks.b[0];
  if (plan.s == plan.m) {
    // B_1 = b_m I: the last term is b_m X^m, added without a product.
    return mat_axpy(blocks.b[1].re(0, 0), y, blocks.b[0], ctx);
  }
  return horner_mixed(blocks.b, y, plan, &counts);
}

void attach_bound(EvaluationReport& report, std::size_t n) {
  try {
    report.bound = horner_bound(report.plan, static_cast<int>(n));
  } catch (const BoundInvalid& e) {
    report.bound.reset();
    report.bound_note = e.what();
  }
}

void attach_diagnostics(EvaluationReport& report, const MPMatrix& x) {
  const EvaluationPlan& plan = report.plan;
  if (plan.r == 0 || plan.nilpotent || plan.norm_B.empty()) return;
  const mpfr_prec_t bits = bound_context().bits();
  Real tau_max(bits);
  for (int i = std::max(plan.nu, 1); i <= plan.r; ++i) {
    const Real& t = plan.tau[static_cast<std::size_t>(i - 1)];
    if (t.is_finite()) tau_max = max(tau_max, t);
  }
  Real tau_nu(bits);
  if (plan.nu <= plan.r) tau_nu = plan.tau[static_cast<std::size_t>(plan.nu - 1)];
  if (!tau_nu.is_finite()) tau_nu = Real(bits);
  const int base = plan.nu - 1;
  report.diagnostics = horner_diagnostics(
      static_cast<int>(x.rows()), plan.s, tau_max, tau_nu,
      plan.norm_B[static_cast<std::size_t>(base)], plan.roundoff_at(base), one_norm(x),
      plan.norm_Y);
}

void finalize(EvaluationReport& report) {
  const CostRatio c = cost_ratio(report.plan);
  report.cost_ratio = c.ratio;
  report.savings = c.savings;
}

// Planned evaluation with a chosen s and an already formed B_0 / powers.
EvaluationReport planned_tail(const MPMatrix& x, const CoefficientSeries& series,
                              const PrecisionCtx& ctx, Blocks blocks, int s, double delta,
                              const MixedOptions& options, EvaluationReport report,
                              Clock::time_point start) {
  const int m = series.degree();
  const int r = m / s;
  {
    Stopwatch sw(report.timing.coefficient_assembly);
    assemble_rest(blocks, series, s, r, ctx);
  }
  std::vector<Real> norms;
  Real norm_y;
  {
    Stopwatch sw(report.timing.norm_estimation);
    norms = block_norms(blocks);
    norm_y = one_norm(blocks.powers[static_cast<std::size_t>(s)]);
  }
  EvaluationPlan plan = plan_precisions(norms, norm_y, s, ctx, delta);
  plan.m = m;
  plan.fix_params = options.fix_params;
  if (!options.lattice.empty()) plan = snap_to_lattice(plan, options.lattice);
  report.plan = plan;
  if (options.plan_only) {
    finalize(report);
    finish_timing(report.timing, start);
    return report;
  }
  {
    Stopwatch sw(report.timing.mixed_horner);
    if (plan.nilpotent) {
      report.result = blocks.b[0];
    } else {
      report.result = combine(blocks, plan, ctx, report.matmuls_by_digits);
    }
  }
  finalize(report);
  attach_diagnostics(report, x);
  if (options.compute_bound) attach_bound(report, x.rows());
  finish_timing(report.timing, start);
  return report;
}

EvaluationReport empty_report(const MPMatrix& x, const PrecisionCtx& ctx) {
  return EvaluationReport(MPMatrix::zeros(x.rows(), x.cols(), ctx));
}

}  // namespace

int EvaluationPlan::digits_at(int level) const {
  if (level < 0 || level > r) throw InvalidArgument("plan level out of range");
  if (level == 0) return working_digits;
  return level_digits[static_cast<std::size_t>(level - 1)];
}

Real EvaluationPlan::roundoff_at(int level) const {
  return Real::pow10(-digits_at(level), bound_context().bits());
}

std::vector<Real> EvaluationPlan::roundoff_ladder() const {
  std::vector<Real> out;
  for (int i = 0; i <= r; ++i) out.push_back(roundoff_at(i));
  return out;
}

int EvaluationReport::total_matmuls() const {
  int total = 0;
  for (const auto& [digits, count] : matmuls_by_digits) total += count;
  return total;
}

int default_block_size(int m) {
  if (m <= 1) return 1;
  int s = static_cast<int>(std::sqrt(static_cast<double>(m)));
  while (s * s < m) ++s;
  while (s > 1 && (s - 1) * (s - 1) >= m) --s;
  return s;
}

PowersAndB0 eval_b0_and_power(const MPMatrix& x, int s, const CoefficientSeries& series,
                              const PrecisionCtx& ctx) {
  require_square(x, "eval_b0_and_power");
  if (s < 1 || s > std::max(series.degree(), 1)) {
    throw InvalidArgument("eval_b0_and_power: need 1 <= s <= m");
  }
  PowersAndB0 out{form_powers(x, s, ctx), MPMatrix::zeros(1, 1, ctx),
                  MPMatrix::zeros(1, 1, ctx)};
  out.b0 = accumulate_block(out.powers, series, 0, std::min(s, series.degree() + 1), ctx);
  out.y = out.powers[static_cast<std::size_t>(s)];
  return out;
}

MPMatrix assemble_block(std::span<const MPMatrix> powers, const CoefficientSeries& series,
                        int s, int block, const PrecisionCtx& ctx) {
  const int first = s * block;
  if (block < 0 || first > series.degree()) {
    throw InvalidArgument("assemble_block: block index past the series degree");
  }
  if (powers.size() < static_cast<std::size_t>(s)) {
    throw InvalidArgument("assemble_block: need powers X^0..X^{s-1}");
  }
  const int len = std::min(s, series.degree() - first + 1);
  return accumulate_block(powers, series, first, len, ctx);
}

EvaluationPlan plan_precisions(std::span<const Real> norm_B, const Real& norm_Y, int s,
                               const PrecisionCtx& ctx, double delta) {
  if (norm_B.empty()) throw InvalidArgument("plan_precisions: need ||B_0||");
  if (!(delta >= 1.0)) throw InvalidArgument("plan_precisions: delta must be >= 1");
  if (norm_Y.sign() < 0) throw InvalidArgument("plan_precisions: ||Y|| must be >= 0");
  const int r = static_cast<int>(norm_B.size()) - 1;
  const int d = ctx.digits();
  EvaluationPlan plan;
  plan.s = s;
  plan.r = r;
  plan.working_digits = d;
  plan.delta = delta;
  plan.norm_B.assign(norm_B.begin(), norm_B.end());
  plan.norm_Y = norm_Y;
  plan.tau = tau_sequence(norm_B, norm_Y).tau;
  plan.level_digits.assign(static_cast<std::size_t>(r), d);
  plan.raw_log10_u.assign(static_cast<std::size_t>(r), 0.0);
  plan.nu = r + 1;

  if (norm_Y.is_zero()) {
    plan.nilpotent = true;
    plan.nu = 1;
    std::fill(plan.level_digits.begin(), plan.level_digits.end(), 1);
    std::fill(plan.raw_log10_u.begin(), plan.raw_log10_u.end(),
              std::numeric_limits<double>::infinity());
    return plan;
  }

  const double log_b0 = norm_B[0].log10_abs();
  const double log_y = norm_Y.log10_abs();
  const double log_delta = std::log10(delta);
  std::vector<double> clamped(static_cast<std::size_t>(r));
  for (int i = 1; i <= r; ++i) {
    const auto k = static_cast<std::size_t>(i - 1);
    double raw;
    if (norm_B[static_cast<std::size_t>(i)].is_zero()) {
      plan.degenerate_levels.push_back(i);
      raw = std::numeric_limits<double>::infinity();
    } else {
      raw = log_b0 - d - norm_B[static_cast<std::size_t>(i)].log10_abs() - i * log_y;
    }
    plan.raw_log10_u[k] = raw;
    clamped[k] = std::clamp(std::isnan(raw) ? -static_cast<double>(d) : raw,
                            -static_cast<double>(d), -1.0);
    if (plan.nu == r + 1 && clamped[k] >= log_delta - d) plan.nu = i;
  }
  for (int i = 1; i <= r; ++i) {
    const auto k = static_cast<std::size_t>(i - 1);
    if (i < plan.nu) continue;
    const long digits = std::lround(-clamped[k]);
    plan.level_digits[k] = static_cast<int>(std::clamp<long>(digits, 1, d));
  }
  for (int i = r - 1; i >= 1; --i) {
    auto& inner = plan.level_digits[static_cast<std::size_t>(i - 1)];
    inner = std::max(inner, plan.level_digits[static_cast<std::size_t>(i)]);
  }
  return plan;
}

EvaluationPlan snap_to_lattice(const EvaluationPlan& plan, std::span<const int> lattice) {
  if (lattice.empty()) throw InvalidArgument("snap_to_lattice: empty lattice");
  std::vector<int> sorted(lattice.begin(), lattice.end());
  std::sort(sorted.begin(), sorted.end());
  if (!std::binary_search(sorted.begin(), sorted.end(), plan.working_digits)) {
    throw InvalidArgument("snap_to_lattice: lattice must contain the working digits " +
                          std::to_string(plan.working_digits));
  }
  EvaluationPlan out = plan;
  for (auto& d : out.level_digits) d = *std::lower_bound(sorted.begin(), sorted.end(), d);
  return out;
}

MPMatrix horner_mixed(std::span<const MPMatrix> blocks, const MPMatrix& y,
                      const EvaluationPlan& plan, std::map<int, int>* matmuls) {
  if (blocks.empty()) throw InvalidArgument("horner_mixed: no blocks");
  const int r = static_cast<int>(blocks.size()) - 1;
  if (r != plan.r) throw InvalidArgument("horner_mixed: plan has a different r");
  require_square(y, "horner_mixed");
  for (const auto& b : blocks) {
    if (b.rows() != y.rows() || b.cols() != y.cols()) {
      throw DimensionError("horner_mixed: blocks and Y differ in shape");
    }
  }
  MPMatrix phi = blocks[static_cast<std::size_t>(r)];
  for (int j = r; j >= 1; --j) {
    const PrecisionCtx product_ctx(plan.digits_at(j));
    const MPMatrix p = mat_mul(y, phi, product_ctx);
    if (matmuls != nullptr) (*matmuls)[product_ctx.digits()] += 1;
    phi = mat_add(blocks[static_cast<std::size_t>(j - 1)], p, PrecisionCtx(plan.digits_at(j - 1)));
  }
  return phi;
}

EvaluationReport ps_fixed(const MPMatrix& x, const CoefficientSeries& series,
                          const PrecisionCtx& ctx) {
  require_square(x, "ps_fixed");
  if (series.coeffs.empty()) throw InvalidArgument("ps_fixed: empty series");
  const auto start = Clock::now();
  EvaluationReport report = empty_report(x, ctx);
  report.algorithm = "fixed";
  const int m = series.degree();
  if (m == 0) {
    report.plan = working_plan(0, 1, 0, ctx);
    report.result = scalar_identity(eval_coeff(series[0], ctx), x.rows(), ctx);
    report.plan.norm_B.push_back(one_norm(report.result));
    report.plan.norm_Y = zero_real();
    finish_timing(report.timing, start);
    return report;
  }
  const int s = default_block_size(m);
  const int r = m / s;
  Blocks blocks;
  {
    Stopwatch sw(report.timing.power);
    blocks.powers = form_powers(x, s, ctx);
  }
  add_matmuls(report.matmuls_by_digits, ctx.digits(), s - 1);
  {
    Stopwatch sw(report.timing.coefficient_assembly);
    blocks.b.push_back(accumulate_block(blocks.powers, series, 0, std::min(s, m + 1), ctx));
    assemble_rest(blocks, series, s, r, ctx);
  }
  report.plan = working_plan(m, s, r, ctx);
  {
    Stopwatch sw(report.timing.mixed_horner);
    report.result = combine(blocks, report.plan, ctx, report.matmuls_by_digits);
  }
  finalize(report);
  finish_timing(report.timing, start);
  return report;
}

EvaluationReport ps_mixed_general(const MPMatrix& x, const CoefficientSeries& series,
                                  const PrecisionCtx& ctx, const MixedOptions& options) {
  require_square(x, "ps_mixed_general");
  const int m = series.degree();
  if (m < 1) throw InvalidArgument("ps_mixed_general: degree must be >= 1");
  const auto start = Clock::now();
  EvaluationReport report = empty_report(x, ctx);
  report.algorithm = "mixed_general";
  const int s = default_block_size(m);
  Blocks blocks;
  {
    Stopwatch sw(report.timing.power);
    blocks.powers = form_powers(x, s, ctx);
  }
  add_matmuls(report.matmuls_by_digits, ctx.digits(), s - 1);
  {
    Stopwatch sw(report.timing.coefficient_assembly);
    blocks.b.push_back(accumulate_block(blocks.powers, series, 0, std::min(s, m + 1), ctx));
  }
  MixedOptions opts = options;
  opts.fix_params = true;
  return planned_tail(x, series, ctx, std::move(blocks), s, options.delta, opts,
                      std::move(report), start);
}

EvaluationReport ps_mixed_general(const MPMatrix& x, const CoefficientSeries& series,
                                  const PrecisionCtx& ctx, double delta) {
  MixedOptions options;
  options.delta = delta;
  return ps_mixed_general(x, series, ctx, options);
}

EvaluationReport ps_mixed_exp(const MPMatrix& x, int m, const PrecisionCtx& ctx,
                              const MixedOptions& options) {
  require_square(x, "ps_mixed_exp");
  if (m < 1) throw InvalidArgument("ps_mixed_exp: m must be >= 1");
  const auto start = Clock::now();
  const CoefficientSeries series = taylor_exp_coeffs(m);
  EvaluationReport report = empty_report(x, ctx);
  report.algorithm = options.fix_params ? "mixed_exp_fixed_s" : "mixed_exp_variable_s";
  int s = default_block_size(m);
  Blocks blocks;
  {
    Stopwatch sw(report.timing.power);
    blocks.powers = form_powers(x, s, ctx);
  }
  {
    Stopwatch sw(report.timing.coefficient_assembly);
    blocks.b.push_back(accumulate_block(blocks.powers, series, 0, std::min(s, m + 1), ctx));
  }

  double delta = options.delta;
  if (!options.fix_params) {
    Real norm_x;
    {
      Stopwatch sw(report.timing.norm_estimation);
      norm_x = one_norm(x);
    }
    const mpfr_prec_t bits = bound_context().bits();
    const Real limit = Real(static_cast<long>(s), bits) / euler_e(bits);
    if (norm_x <= limit) {
      // Grow s while the next power is still large relative to B_0.
      while (s < m) {
        Real norm_y;
        Real norm_b0;
        {
          Stopwatch sw(report.timing.norm_estimation);
          norm_y = one_norm(blocks.powers.back());
          norm_b0 = one_norm(blocks.b[0]);
        }
        if (!(norm_y > norm_b0 * pow(norm_x, static_cast<long>(s)))) break;
        {
          Stopwatch sw(report.timing.coefficient_assembly);
          blocks.b[0] = mat_axpy(eval_coeff(series[static_cast<std::size_t>(s)], ctx),
                                 blocks.powers.back(), blocks.b[0], ctx);
        }
        {
          Stopwatch sw(report.timing.power);
          blocks.powers.push_back(mat_mul(blocks.powers.back(), x, ctx));
        }
        ++s;
      }
      delta = 1.0;
    } else {
      report.algorithm = "mixed_exp_fixed_s";
    }
  }
  add_matmuls(report.matmuls_by_digits, ctx.digits(), s - 1);
  MixedOptions opts = options;
  opts.delta = delta;
  return planned_tail(x, series, ctx, std::move(blocks), s, delta, opts, std::move(report),
                      start);
}

EvaluationReport ps_mixed_exp(const MPMatrix& x, int m, const PrecisionCtx& ctx,
                              bool fix_params, double delta) {
  MixedOptions options;
  options.fix_params = fix_params;
  options.delta = delta;
  return ps_mixed_exp(x, m, ctx, options);
}

CostRatio cost_ratio(const EvaluationPlan& plan) {
  CostRatio out;
  if (plan.r == 0 || (plan.m > 0 && plan.s >= plan.m)) return out;
  const double d = plan.working_digits;
  double sum = 0.0;
  for (int di : plan.level_digits) sum += di;
  out.ratio = ((plan.s - 1) * d + sum) / ((plan.s + plan.r - 1) * d);
  out.savings = 1.0 - out.ratio;
  return out;
}

Real horner_bound(const EvaluationPlan& plan, int n) {
  if (plan.r == 0 || plan.nilpotent) return zero_real();
  if (plan.norm_B.size() != static_cast<std::size_t>(plan.r) + 1) {
    throw InvalidArgument("horner_bound: plan carries no block norms");
  }
  BoundInputs in;
  in.n = n;
  in.s = plan.s;
  in.r = plan.r;
  in.nu = 1;
  in.precisions = plan.roundoff_ladder();
  in.norm_B = plan.norm_B;
  in.norm_Y = plan.norm_Y;
  return thm21_bound(in);
}

}  // namespace mpps
