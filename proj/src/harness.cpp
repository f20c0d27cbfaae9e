#include "mpps/harness.hpp"

#include <cmath>
#include <map>

#include "mpps/errors.hpp"
#include "mpps/generators.hpp"
#include "mpps/io.hpp"

namespace mpps {

namespace {

bool looks_like_path(const std::string& name) {
  return name.find('/') != std::string::npos || name.find('.') != std::string::npos;
}

MPMatrix generate(const MatrixSpec& spec, const PrecisionCtx& ctx) {
  const std::string& g = spec.name;
  if (g == "cauchy") return gen_cauchy(spec.n, ctx);
  if (g == "ward") return gen_ward(ctx);
  if (g == "nonnormal2") return gen_nonnormal2(ctx);
  if (g == "triu_rand") return gen_triu_rand(spec.n, spec.triu_scale, spec.seed, ctx);
  if (g == "lotkin") return gen_lotkin(spec.n, ctx);
  if (g == "smoke") return gen_smoke(spec.n, ctx);
  if (looks_like_path(g)) return load_matrix(g, ctx);
  throw InvalidArgument("unknown matrix '" + g + "'");
}

}  // namespace

std::string MatrixSpec::id() const {
  std::string out = name;
  if (name != "ward" && name != "nonnormal2" && !looks_like_path(name)) {
    out += "(" + std::to_string(n) + ")";
  }
  if (name == "triu_rand") out += "#" + std::to_string(seed);
  return out;
}

MPMatrix make_matrix(const MatrixSpec& spec, const PrecisionCtx& ctx, long* ell_used) {
  MPMatrix a = generate(spec, ctx);
  long ell = spec.ell;
  if (spec.normalize) {
    const Real norm = one_norm(a);
    if (!norm.is_zero()) {
      const long needed = static_cast<long>(std::ceil(log2(norm).to_double()));
      ell = std::max(ell, needed);
      // Guard against the 16-digit norm sitting exactly on a power of two.
      const Real one(1L, norm.bits());
      while (one_norm(scale_pow2(a, ell)) > one) ++ell;
    }
  }
  if (ell_used != nullptr) *ell_used = ell;
  return ell == 0 ? a : scale_pow2(a, ell);
}

CoefficientSeries make_series(const SeriesSpec& spec) {
  if (!spec.path.empty()) return load_series(spec.path);
  switch (parse_family(spec.family)) {
    case SeriesFamily::taylor_exp: return taylor_exp_coeffs(spec.m);
    case SeriesFamily::pade_exp_num: return pade_exp_coeffs(spec.m, spec.m).first;
    case SeriesFamily::pade_exp_den: return pade_exp_coeffs(spec.m, spec.m).second;
    case SeriesFamily::taylor_cos_in_x_squared: return taylor_cos_coeffs(spec.m);
    case SeriesFamily::custom: break;
  }
  throw InvalidArgument("a custom series needs a coefficient file");
}

MPMatrix series_argument(const MPMatrix& x, const CoefficientSeries& series,
                         const PrecisionCtx& ctx) {
  if (series.variable == SeriesVariable::x_squared) return mat_mul(x, x, ctx);
  return round_to(x, ctx);
}

MPMatrix reference_eval(const MPMatrix& x, const CoefficientSeries& series,
                        const PrecisionCtx& ctx) {
  const PrecisionCtx twice(2 * ctx.digits());
  const MPMatrix arg = series_argument(x, series, twice);
  return round_to(ps_fixed(arg, series, twice).result, ctx);
}

Real relative_error(const MPMatrix& approx, const MPMatrix& ref) {
  const int d = std::max(approx.produced_at().digits(), ref.produced_at().digits());
  const MPMatrix diff = mat_sub(approx, ref, PrecisionCtx(2 * d + 2));
  const Real denom = one_norm(ref);
  const Real num = one_norm(diff);
  if (denom.is_zero()) return num.is_zero() ? num : Real::infinity(num.bits());
  return num / denom;
}

EvaluationReport evaluate(const ExperimentConfig& cfg, const MPMatrix& x,
                          const CoefficientSeries& series, bool plan_only) {
  const PrecisionCtx ctx(cfg.digits);
  MixedOptions options;
  options.delta = cfg.delta;
  options.fix_params = cfg.fix_params;
  options.lattice = cfg.lattice;
  options.compute_bound = cfg.compute_bound;
  options.plan_only = plan_only;
  const MPMatrix arg = series_argument(x, series, ctx);
  if (series.family == SeriesFamily::taylor_exp && cfg.series.path.empty()) {
    return ps_mixed_exp(arg, series.degree(), ctx, options);
  }
  return ps_mixed_general(arg, series, ctx, options);
}

ComparisonRecord run_compare(const ExperimentConfig& cfg) {
  const PrecisionCtx ctx(cfg.digits);
  ComparisonRecord rec;
  const MPMatrix x = make_matrix(cfg.matrix, ctx, &rec.ell);
  const CoefficientSeries series = make_series(cfg.series);
  const EvaluationReport mixed = evaluate(cfg, x, series);
  const EvaluationReport fixed = ps_fixed(series_argument(x, series, ctx), series, ctx);
  const MPMatrix ref = reference_eval(x, series, ctx);

  rec.matrix_id = cfg.matrix.id();
  rec.series = to_string(series.family);
  rec.n = static_cast<int>(x.rows());
  rec.m = series.degree();
  rec.digits = cfg.digits;
  rec.seed = cfg.matrix.seed;
  rec.eps_v = relative_error(mixed.result, ref);
  rec.eps_f = relative_error(fixed.result, ref);
  const mpfr_prec_t bits = bound_context().bits();
  rec.rnu = Real(static_cast<long>(mixed.plan.r) * rec.n, bits) * ctx.unit_roundoff();
  rec.savings = mixed.savings;
  rec.plan = mixed.plan;
  return rec;
}

std::vector<int> table1_default_degrees(const std::vector<int>& digits_list) {
  static const std::map<int, int> degrees{{32, 42}, {64, 64}, {128, 100}, {256, 182}};
  std::vector<int> out;
  for (int d : digits_list) {
    const auto it = degrees.find(d);
    if (it == degrees.end()) {
      throw InvalidArgument("no default degree for " + std::to_string(d) +
                            " digits; pass the degrees explicitly");
    }
    out.push_back(it->second);
  }
  return out;
}

std::vector<Table1Row> run_table1(const ExperimentConfig& cfg, const std::vector<int>& digits_list,
                                  const std::vector<int>& m_list) {
  if (digits_list.empty()) throw InvalidArgument("table1 needs at least one precision");
  if (m_list.size() != 1 && m_list.size() != digits_list.size()) {
    throw InvalidArgument("table1: give one degree or one per precision");
  }
  std::vector<Table1Row> rows;
  for (std::size_t k = 0; k < digits_list.size(); ++k) {
    ExperimentConfig row_cfg = cfg;
    row_cfg.digits = digits_list[k];
    row_cfg.series.m = m_list.size() == 1 ? m_list[0] : m_list[k];
    const PrecisionCtx ctx(row_cfg.digits);
    const MPMatrix x = make_matrix(row_cfg.matrix, ctx);
    const CoefficientSeries series = make_series(row_cfg.series);
    const EvaluationReport report = evaluate(row_cfg, x, series, true);
    Table1Row row;
    row.digits = row_cfg.digits;
    row.m = series.degree();
    row.s = report.plan.s;
    row.r = report.plan.r;
    row.nu = report.plan.nu;
    row.schedule = report.plan.level_digits;
    row.cost_ratio = report.cost_ratio;
    row.savings = report.savings;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace mpps
