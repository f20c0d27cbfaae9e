#include "mpps/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "mpps/coefficients.hpp"
#include "mpps/error_bounds.hpp"
#include "mpps/errors.hpp"
#include "mpps/generators.hpp"
#include "mpps/harness.hpp"
#include "mpps/ps_engine.hpp"

namespace mpps {

namespace {

using Rng = std::mt19937_64;

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double uniform_real(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

MPMatrix random_matrix(Rng& rng, int n, double scale, const PrecisionCtx& ctx) {
  const auto un = static_cast<std::size_t>(n);
  auto z = normal_variates(un * un, rng());
  for (auto& v : z) v *= scale;
  return MPMatrix::from_doubles(un, un, z, ctx);
}

// Exact-enough power by repeated multiplication at `ctx`.
MPMatrix power(const MPMatrix& x, int t, const PrecisionCtx& ctx) {
  MPMatrix out = round_to(x, ctx);
  for (int k = 1; k < t; ++k) out = mat_mul(out, x, ctx);
  return out;
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream out;
  out.precision(precision);
  out << v;
  return out.str();
}

std::string percent(double fraction) { return fmt(100.0 * fraction, 4) + "%"; }

CriterionResult pade_golden() {
  CriterionResult res{1, "Pade [13/13] numerator golden coefficients", false, {}, 0.0};
  const auto num = pade_exp_coeffs(13, 13).first;
  const char* expected[] = {"1/2",      "3/25",    "11/600",   "11/5520",
                            "3/18400",  "1/96600", "1/1932000"};
  int matched = 0;
  std::string mismatch;
  for (int j = 1; j <= 7; ++j) {
    if (num[static_cast<std::size_t>(j)] == mpq_class(expected[j - 1])) {
      ++matched;
    } else if (mismatch.empty()) {
      mismatch = "; b_" + std::to_string(j) + " = " + num[static_cast<std::size_t>(j)].get_str();
    }
  }
  res.passed = matched == 7;
  res.detail = std::to_string(matched) + "/7 coefficients exact" + mismatch;
  return res;
}

CriterionResult ward_example() {
  CriterionResult res{2, "Ward example block norms and tau_1", false, {}, 0.0};
  const PrecisionCtx ctx(64);
  const MPMatrix x = scale_pow2(gen_ward(ctx), 6);
  const auto series = pade_exp_coeffs(13, 13).first;
  const auto p = eval_b0_and_power(x, 4, series, ctx);
  const MPMatrix b1 = assemble_block(p.powers, series, 4, 1, ctx);
  const double b0 = one_norm(p.b0).to_double();
  const double b1y = (one_norm(b1) * one_norm(p.y)).to_double();
  const double tau = b1y / b0;
  const bool ok_b0 = b0 >= 10.0 && b0 <= 12.0;
  const bool ok_b1y = b1y >= 8.2e-3 && b1y <= 9.0e-3;
  const bool ok_tau = tau >= 7.4e-4 && tau <= 8.2e-4;
  res.passed = ok_b0 && ok_b1y && ok_tau;
  res.detail = "||B0|| = " + fmt(b0) + (ok_b0 ? "" : " (want [10, 12])") +
               ", ||B1||*||X^4|| = " + fmt(b1y) + (ok_b1y ? "" : " (want [8.2e-3, 9.0e-3])") +
               ", tau_1 = " + fmt(tau) + (ok_tau ? "" : " (want [7.4e-4, 8.2e-4])");
  return res;
}

struct TableRow {
  int m;
  int s;
  int r;
  int digits;
  std::vector<int> schedule;
  double savings;
};

const std::vector<TableRow>& table1_rows() {
  static const std::vector<TableRow> rows{
      {42, 7, 6, 32, {30, 25, 18, 11, 3, 1}, 0.271},
      {64, 8, 8, 64, {61, 55, 47, 38, 28, 18, 7, 1}, 0.268},
      {100, 10, 10, 128, {124, 115, 104, 92, 78, 64, 49, 34, 18, 1}, 0.247},
      {182, 14, 13, 256, {248, 234, 217, 197, 176, 154, 131, 107, 82, 57, 31, 4, 1}, 0.254},
  };
  return rows;
}

CriterionResult cost_formula() {
  CriterionResult res{3, "cost-ratio savings on the reference schedules", true, {}, 0.0};
  std::string detail;
  for (const auto& row : table1_rows()) {
    EvaluationPlan plan;
    plan.m = row.m;
    plan.s = row.s;
    plan.r = row.r;
    plan.working_digits = row.digits;
    plan.level_digits = row.schedule;
    const double got = cost_ratio(plan).savings;
    const bool ok = std::fabs(got - row.savings) <= 0.001 + 1e-12;
    res.passed = res.passed && ok;
    if (!detail.empty()) detail += ", ";
    detail += "d=" + std::to_string(row.digits) + ": " + percent(got) + (ok ? "" : " (want " + percent(row.savings) + ")");
  }
  res.detail = detail;
  return res;
}

CriterionResult planner_reproduction() {
  CriterionResult res{4, "planner reproduces the cauchy(100) schedules", true, {}, 0.0};
  ExperimentConfig cfg;
  cfg.matrix.name = "cauchy";
  cfg.matrix.n = 100;
  cfg.series.family = "taylor_exp";
  std::vector<int> digits;
  std::vector<int> degrees;
  for (const auto& row : table1_rows()) {
    digits.push_back(row.digits);
    degrees.push_back(row.m);
  }
  const auto got = run_table1(cfg, digits, degrees);
  std::string detail;
  for (std::size_t k = 0; k < got.size(); ++k) {
    const auto& want = table1_rows()[k];
    const auto& row = got[k];
    bool ok = row.s == want.s && row.r == want.r && row.schedule.size() == want.schedule.size();
    int worst = 0;
    if (ok) {
      for (std::size_t i = 0; i < row.schedule.size(); ++i) {
        worst = std::max(worst, std::abs(row.schedule[i] - want.schedule[i]));
        if (i > 0 && row.schedule[i] > row.schedule[i - 1]) ok = false;
      }
      ok = ok && worst <= 2 && row.schedule.back() <= 2 &&
           std::fabs(row.savings - want.savings) <= 0.03;
    }
    res.passed = res.passed && ok;
    if (!detail.empty()) detail += "; ";
    detail += "d=" + std::to_string(row.digits) + " max|diff|=" + std::to_string(worst) +
              " savings " + percent(row.savings) + (ok ? "" : " FAIL");
  }
  res.detail = detail;
  return res;
}

CriterionResult nonnormal_diagnostics() {
  CriterionResult res{5, "nonnormal example: d*, alpha_m, ||X||_1, extra squarings", false, {}, 0.0};
  const PrecisionCtx ctx(32);
  const MPMatrix x = scale_pow2(gen_nonnormal2(ctx), 1);
  const int m = 42;
  const AlphaResult a = alpha_m(x, m);
  const Real norm = one_norm(x, ctx);
  const int ell = extra_squarings(norm, default_block_size(m));
  // The column sum is 500000.05; the reference value carries one digit.
  const Real exact = Real::parse("500000.05", ctx.bits());
  const bool norm_ok = abs(norm - exact) <= Real::pow10(-20, ctx.bits()) &&
                       norm.to_string(1) == "5e+05";
  const double alpha = a.alpha.to_double();
  const bool ok_alpha = alpha >= 0.61 && alpha <= 0.71;
  res.passed = a.d_star == 7 && ok_alpha && norm_ok && ell == 18;
  res.detail = "d* = " + std::to_string(a.d_star) + ", alpha = " + fmt(alpha) +
               ", ||X||_1 = " + norm.to_string(9) + ", extra squarings = " + std::to_string(ell);
  return res;
}

struct AccuracyInstance {
  std::string gen;
  int n;
  std::string family;
  int digits;
};

int suite_degree(const std::string& family, int digits) {
  const bool lo = digits <= 32;
  if (family == "taylor_exp") return lo ? 30 : 52;
  if (family == "taylor_cos_in_x_squared") return lo ? 15 : 26;
  return lo ? 13 : 24;
}

CriterionResult accuracy_suite(const AcceptanceOptions& opts) {
  CriterionResult res{6, "accuracy suite: mixed vs 2x-digit reference", false, {}, 0.0};
  const std::vector<std::string> gens{"cauchy", "lotkin", "smoke", "triu_rand"};
  const std::vector<int> ns{8, 20, 50};
  const std::vector<std::string> families{"taylor_exp", "pade_exp_num", "pade_exp_den",
                                          "taylor_cos_in_x_squared"};
  std::vector<AccuracyInstance> instances;
  for (std::size_t g = 0; g < gens.size(); ++g) {
    for (std::size_t k = 0; k < ns.size(); ++k) {
      for (std::size_t f = 0; f < families.size(); ++f) {
        const int digits = (g + k + f) % 2 == 0 ? 32 : 64;
        instances.push_back({gens[g], ns[k], families[f], digits});
      }
    }
  }
  int within = 0;
  int relaxed = 0;
  double worst = 0.0;
  std::string worst_id;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    ExperimentConfig cfg;
    cfg.matrix.name = inst.gen;
    cfg.matrix.n = inst.n;
    cfg.matrix.seed = opts.seed + i;
    cfg.matrix.normalize = true;
    cfg.series.family = inst.family;
    cfg.series.m = suite_degree(inst.family, inst.digits);
    cfg.digits = inst.digits;
    const ComparisonRecord rec = run_compare(cfg);
    const Real limit = Real(10L, rec.rnu.bits()) * rec.rnu;
    if (rec.eps_v <= limit) ++within;
    if (rec.eps_v <= max(limit, Real(10L, rec.eps_f.bits()) * rec.eps_f)) ++relaxed;
    const double ratio = rec.rnu.is_zero() ? 0.0 : (rec.eps_v / rec.rnu).to_double();
    if (ratio > worst) {
      worst = ratio;
      worst_id = rec.matrix_id + "/" + inst.family + "/d" + std::to_string(inst.digits);
    }
  }
  const auto total = static_cast<int>(instances.size());
  res.passed = total >= 30 && within >= 0.95 * total && relaxed == total;
  res.detail = std::to_string(total) + " instances, " + std::to_string(within) +
               " within 10rnu (" + percent(static_cast<double>(within) / total) + "), " +
               std::to_string(relaxed) + " within max(10rnu, 10eps_f); worst eps_v/rnu = " +
               fmt(worst) + " at " + worst_id;
  return res;
}

// Mixed Horner on random blocks against the same blocks at 4x digits.
bool horner_containment_trial(Rng& rng, std::string& why) {
  const int n = uniform_int(rng, 1, 8);
  const int r = uniform_int(rng, 1, 4);
  const int d0 = uniform_int(rng, 10, 30);
  const PrecisionCtx ctx(d0);
  std::vector<MPMatrix> blocks;
  for (int i = 0; i <= r; ++i) {
    blocks.push_back(random_matrix(rng, n, std::pow(10.0, uniform_real(rng, -3.0, 1.0)), ctx));
  }
  const MPMatrix y = random_matrix(rng, n, std::pow(10.0, uniform_real(rng, -2.0, 0.5)), ctx);

  EvaluationPlan plan;
  plan.s = 2;
  plan.r = r;
  plan.nu = 1;
  plan.working_digits = d0;
  for (int i = 1; i <= r; ++i) plan.level_digits.push_back(uniform_int(rng, 2, d0));
  for (const auto& b : blocks) plan.norm_B.push_back(one_norm(b, bound_context()));
  plan.norm_Y = one_norm(y, bound_context());

  const MPMatrix got = horner_mixed(blocks, y, plan);
  EvaluationPlan fine = plan;
  fine.working_digits = 4 * d0;
  std::fill(fine.level_digits.begin(), fine.level_digits.end(), 4 * d0);
  const MPMatrix oracle = horner_mixed(blocks, y, fine);
  const Real err = one_norm(mat_sub(got, oracle, PrecisionCtx(8 * d0)), bound_context());
  const Real bound = horner_bound(plan, n);
  if (err <= bound) return true;
  why = "horner n=" + std::to_string(n) + " r=" + std::to_string(r) + " err " +
        err.to_string(4) + " > bound " + bound.to_string(4);
  return false;
}

// Power bound of repeated multiplication, checked entrywise.
bool power_containment_trial(Rng& rng, std::string& why) {
  const int n = uniform_int(rng, 1, 8);
  const int t = uniform_int(rng, 2, 8);
  const int d = uniform_int(rng, 8, 30);
  const PrecisionCtx ctx(d);
  const MPMatrix x = random_matrix(rng, n, uniform_real(rng, 0.1, 3.0), ctx);
  const auto ones = custom_series(std::vector<mpq_class>(static_cast<std::size_t>(t) + 1, 1));
  const MPMatrix got = eval_b0_and_power(x, t, ones, ctx).y;
  const PrecisionCtx exact((t + 1) * d + 20);
  const MPMatrix truth = power(x, t, exact);
  const MPMatrix abs_power = power(abs_entries(x, exact), t, exact);
  const Real g = power_error_bound(n, t, ctx.unit_roundoff());
  const MPMatrix diff = mat_sub(got, truth, exact);
  for (std::size_t k = 0; k < diff.re_data().size(); ++k) {
    if (abs(diff.re_data()[k]) > g * abs_power.re_data()[k]) {
      why = "power n=" + std::to_string(n) + " t=" + std::to_string(t) + " entry " +
            std::to_string(k) + " exceeds gamma_(t-1)n |X|^t";
      return false;
    }
  }
  return true;
}

// Uniform assembly bound over the 1-norm.
bool assembly_containment_trial(Rng& rng, std::string& why) {
  const int n = uniform_int(rng, 1, 8);
  const int s = uniform_int(rng, 1, 8);
  const int d = uniform_int(rng, 16, 30);
  const PrecisionCtx ctx(d);
  const MPMatrix x = random_matrix(rng, n, uniform_real(rng, 0.1, 2.0), ctx);
  std::vector<mpq_class> coeffs;
  for (double c : normal_variates(static_cast<std::size_t>(s) + 1, rng())) coeffs.emplace_back(c);
  const auto series = custom_series(coeffs);
  const MPMatrix got = eval_b0_and_power(x, s, series, ctx).b0;

  const PrecisionCtx exact((s + 1) * d + 40);
  const mpfr_prec_t bits = bound_context().bits();
  MPMatrix truth = scalar_identity(eval_coeff(coeffs[0], exact), x.rows(), exact);
  std::vector<Real> abs_coeffs{abs(eval_coeff(coeffs[0], bound_context()))};
  std::vector<Real> abs_norms{Real(1L, bits)};
  MPMatrix xp = round_to(x, exact);
  MPMatrix absp = abs_entries(x, exact);
  const MPMatrix absx = absp;
  for (int j = 1; j < s; ++j) {
    truth = mat_axpy(eval_coeff(coeffs[static_cast<std::size_t>(j)], exact), xp, truth, exact);
    abs_coeffs.push_back(abs(eval_coeff(coeffs[static_cast<std::size_t>(j)], bound_context())));
    abs_norms.push_back(one_norm(absp, bound_context()));
    xp = mat_mul(xp, x, exact);
    absp = mat_mul(absp, absx, exact);
  }
  const Real err = one_norm(mat_sub(got, truth, exact), bound_context());
  const Real bound = assembly_error_bound(abs_coeffs, abs_norms, n, s, ctx.unit_roundoff());
  if (err <= bound) return true;
  why = "assembly n=" + std::to_string(n) + " s=" + std::to_string(s) + " err " +
        err.to_string(4) + " > bound " + bound.to_string(4);
  return false;
}

CriterionResult bound_containment(const AcceptanceOptions& opts) {
  CriterionResult res{7, "bound containment: Horner, powers, assembly", false, {}, 0.0};
  Rng rng(opts.seed ^ 0x7777);
  const std::vector<std::pair<std::string, std::function<bool(Rng&, std::string&)>>> suites{
      {"horner", horner_containment_trial},
      {"power", power_containment_trial},
      {"assembly", assembly_containment_trial}};
  int violations = 0;
  std::string first_violation;
  std::string detail;
  for (const auto& [name, trial] : suites) {
    int bad = 0;
    for (int k = 0; k < 100; ++k) {
      std::string why;
      if (!trial(rng, why)) {
        ++bad;
        if (first_violation.empty()) first_violation = why;
      }
    }
    violations += bad;
    if (!detail.empty()) detail += ", ";
    detail += name + " " + std::to_string(100 - bad) + "/100";
  }
  res.passed = violations == 0;
  res.detail = detail + (first_violation.empty() ? "" : "; first violation: " + first_violation);
  return res;
}

CriterionResult degenerate_equivalence(const AcceptanceOptions& opts) {
  CriterionResult res{8, "clamped plans reproduce fixed precision bit for bit", false, {}, 0.0};
  Rng rng(opts.seed ^ 0x8888);
  const int digit_choices[] = {16, 24, 32, 48, 64};
  int clamped = 0;
  int identical = 0;
  for (int k = 0; k < 20; ++k) {
    const int n = uniform_int(rng, 2, 10);
    const int m = uniform_int(rng, 4, 30);
    const PrecisionCtx ctx(digit_choices[uniform_int(rng, 0, 4)]);
    // Dominant 2I keeps ||X^j|| >= 1 growing with j.
    const MPMatrix e = random_matrix(rng, n, 0.1, ctx);
    const MPMatrix x = mat_add(scalar_identity(Real(2L, ctx.bits()), static_cast<std::size_t>(n), ctx), e, ctx);
    std::vector<mpq_class> coeffs;
    for (int i = 0; i <= m; ++i) coeffs.emplace_back(k % 2 == 0 ? 1 : i + 1);
    const auto series = custom_series(coeffs);
    const EvaluationReport mixed = ps_mixed_general(x, series, ctx, 10.0);
    const EvaluationReport fixed = ps_fixed(x, series, ctx);
    const auto& plan = mixed.plan;
    const bool all_working =
        plan.nu == plan.r + 1 &&
        std::all_of(plan.level_digits.begin(), plan.level_digits.end(),
                    [&](int d) { return d == ctx.digits(); });
    if (all_working) ++clamped;
    if (mixed.result.identical(fixed.result)) ++identical;
  }
  res.passed = clamped == 20 && identical == 20;
  res.detail = std::to_string(clamped) + "/20 plans fully clamped, " + std::to_string(identical) +
               "/20 bitwise identical";
  return res;
}

CriterionResult recurrence_agreement(const AcceptanceOptions& opts) {
  CriterionResult res{9, "closed-form and recurrence f-constants agree", false, {}, 0.0};
  Rng rng(opts.seed ^ 0x9999);
  const mpfr_prec_t bits = bound_context().bits();
  const Real tol = Real::pow10(-30, bits);
  int agree = 0;
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int r = uniform_int(rng, 1, 6);
    const int n = uniform_int(rng, 1, 100);
    const int d0 = uniform_int(rng, 8, 64);
    std::vector<Real> ladder{Real::pow10(-d0, bits)};
    for (int i = 1; i <= r; ++i) ladder.push_back(Real::pow10(-uniform_int(rng, 1, d0), bits));
    const auto closed = f_constants_closed(n, ladder);
    const auto rec = f_constants_recurrence(n, ladder);
    bool ok = closed.size() == rec.size();
    for (std::size_t i = 0; ok && i < closed.size(); ++i) {
      const Real rel = abs(closed[i] - rec[i]) / abs(closed[i]);
      worst = std::max(worst, rel.to_double());
      if (rel > tol) ok = false;
    }
    if (ok) ++agree;
  }
  res.passed = agree == 50;
  res.detail = std::to_string(agree) + "/50 ladders agree, worst relative gap " + fmt(worst, 3);
  return res;
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& options) {
  if (id < 1 || id > kCriterionCount) {
    throw InvalidArgument("no acceptance criterion " + std::to_string(id));
  }
  const auto start = std::chrono::steady_clock::now();
  CriterionResult res;
  try {
    switch (id) {
      case 1: res = pade_golden(); break;
      case 2: res = ward_example(); break;
      case 3: res = cost_formula(); break;
      case 4: res = planner_reproduction(); break;
      case 5: res = nonnormal_diagnostics(); break;
      case 6: res = accuracy_suite(options); break;
      case 7: res = bound_containment(options); break;
      case 8: res = degenerate_equivalence(options); break;
      default: res = recurrence_agreement(options); break;
    }
  } catch (const std::exception& e) {
    res = CriterionResult{id, "criterion " + std::to_string(id), false, e.what(), 0.0};
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, options));
  return out;
}

}  // namespace mpps
