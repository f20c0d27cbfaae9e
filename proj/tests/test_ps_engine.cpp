#include <doctest.h>

#include <cmath>
#include <random>

#include "mpps/errors.hpp"
#include "mpps/generators.hpp"
#include "mpps/ps_engine.hpp"

using namespace mpps;

namespace {

MPMatrix random_matrix(std::size_t n, double scale, std::uint64_t seed, const PrecisionCtx& ctx) {
  std::vector<double> v = normal_variates(n * n, seed);
  for (auto& e : v) e *= scale;
  return MPMatrix::from_doubles(n, n, v, ctx);
}

// Relative 1-norm distance, difference formed at `digits`.
double rel_err(const MPMatrix& a, const MPMatrix& ref, int digits = 200) {
  const PrecisionCtx wide(digits);
  return (one_norm(mat_sub(a, ref, wide), wide) / one_norm(ref, wide)).to_double();
}

// sum_k x^k/k! in plain MPFR arithmetic.
Real scalar_exp_taylor(double x, int m, mpfr_prec_t bits) {
  const Real xr(x, bits);
  Real term(1L, bits);
  Real acc(bits);
  for (int k = 0; k <= m; ++k) {
    acc = acc + term;
    term = term * xr / Real(static_cast<long>(k + 1), bits);
  }
  return acc;
}

}  // namespace

TEST_CASE("default block size is ceil(sqrt(m))") {
  CHECK(default_block_size(1) == 1);
  CHECK(default_block_size(4) == 2);
  CHECK(default_block_size(5) == 3);
  CHECK(default_block_size(42) == 7);
  CHECK(default_block_size(64) == 8);
  CHECK(default_block_size(182) == 14);
  for (int m = 1; m < 2000; ++m) {
    const int s = default_block_size(m);
    CHECK(s * s >= m);
    CHECK((s - 1) * (s - 1) < m);
  }
}

TEST_CASE("zero matrix evaluates to b0 I") {
  const PrecisionCtx ctx(20);
  const auto series = taylor_exp_coeffs(9);
  const MPMatrix zero = MPMatrix::zeros(3, 3, ctx);
  const auto fixed = ps_fixed(zero, series, ctx);
  CHECK(fixed.result.identical(MPMatrix::identity(3, ctx)));
  const auto mixed = ps_mixed_general(zero, series, ctx);
  CHECK(mixed.plan.nilpotent);
  CHECK(mixed.result.identical(MPMatrix::identity(3, ctx)));
  CHECK(ps_mixed_exp(zero, 9, ctx).result.identical(MPMatrix::identity(3, ctx)));
}

TEST_CASE("degree one and degree zero") {
  const PrecisionCtx ctx(16);
  const MPMatrix x = random_matrix(3, 1.0, 3, ctx);
  const auto one = ps_fixed(x, taylor_exp_coeffs(1), ctx);
  CHECK(one.plan.s == 1);
  CHECK(one.plan.r == 1);
  CHECK(one.total_matmuls() == 0);
  CHECK(one.result.identical(mat_add(MPMatrix::identity(3, ctx), x, ctx)));
  const auto zero = ps_fixed(x, custom_series({mpq_class(5)}), ctx);
  CHECK(zero.result.re(1, 1).to_double() == 5.0);
  CHECK(zero.result.re(0, 1).is_zero());
}

TEST_CASE("scalar exponential matches a direct sum") {
  const PrecisionCtx ctx(32);
  for (double x : {0.3, -0.7, 1.0}) {
    const MPMatrix a = MPMatrix::from_doubles(1, 1, std::vector<double>{x}, ctx);
    const Real expect = scalar_exp_taylor(x, 16, 400);
    const MPMatrix oracle(1, 1, {expect}, {}, PrecisionCtx(120));
    const double u = 1e-32;
    CHECK(rel_err(ps_fixed(a, taylor_exp_coeffs(16), ctx).result, oracle) <= 20 * u);
    CHECK(rel_err(ps_mixed_exp(a, 16, ctx).result, oracle) <= 20 * u);
  }
}

TEST_CASE("eval_b0_and_power") {
  const PrecisionCtx ctx(24);
  const MPMatrix x = random_matrix(4, 0.5, 9, ctx);
  const auto series = taylor_exp_coeffs(10);
  const auto s1 = eval_b0_and_power(x, 1, series, ctx);
  CHECK(s1.b0.identical(MPMatrix::identity(4, ctx)));
  CHECK(s1.y.identical(round_to(x, ctx)));

  const auto s3 = eval_b0_and_power(x, 3, series, ctx);
  REQUIRE(s3.powers.size() == 4);
  CHECK(s3.powers[2].identical(mat_mul(x, x, ctx)));
  CHECK(s3.y.identical(mat_mul(s3.powers[2], x, ctx)));
  MPMatrix b0 = MPMatrix::identity(4, ctx);
  b0 = mat_axpy(eval_coeff(series[1], ctx), s3.powers[1], b0, ctx);
  b0 = mat_axpy(eval_coeff(series[2], ctx), s3.powers[2], b0, ctx);
  CHECK(s3.b0.identical(b0));
  CHECK_THROWS_AS(eval_b0_and_power(x, 11, series, ctx), InvalidArgument);
  CHECK_THROWS_AS(eval_b0_and_power(MPMatrix::zeros(2, 3, ctx), 2, series, ctx), DimensionError);
}

TEST_CASE("nilpotent argument returns B0") {
  const PrecisionCtx ctx(32);
  const MPMatrix x = gen_triu_rand(4, 1.0, 5, ctx);
  const auto series = taylor_exp_coeffs(16);
  const auto report = ps_mixed_general(x, series, ctx);
  CHECK(report.plan.s == 4);
  CHECK(report.plan.nilpotent);
  CHECK(report.plan.nu == 1);
  const auto pb = eval_b0_and_power(x, 4, series, ctx);
  CHECK(pb.y.is_zero());
  CHECK(report.result.identical(pb.b0));
  for (int d : report.plan.level_digits) CHECK(d == 1);
}

TEST_CASE("Ward Pade numerator block norms") {
  const PrecisionCtx ctx(64);
  const MPMatrix x = scale_pow2(gen_ward(ctx), 6);
  const auto series = pade_exp_coeffs(13, 13).first;
  MixedOptions opts;
  opts.plan_only = true;
  const auto report = ps_mixed_general(x, series, ctx, opts);
  const auto& plan = report.plan;
  CHECK(plan.s == 4);
  CHECK(plan.r == 3);
  CHECK(plan.norm_B[0].to_double() == doctest::Approx(5.6589).epsilon(1e-4));
  CHECK((plan.norm_B[1] * plan.norm_Y).to_double() == doctest::Approx(1.6840e-3).epsilon(1e-3));
  CHECK(plan.tau[0].to_double() == doctest::Approx(2.9758e-4).epsilon(1e-3));
}

TEST_CASE("flat block norms keep every level at working precision") {
  const PrecisionCtx ctx(30);
  const std::vector<Real> norms(5, Real(1L, 64));
  const auto plan = plan_precisions(norms, Real(1L, 64), 3, ctx, 10.0);
  CHECK(plan.nu == plan.r + 1);
  for (int d : plan.level_digits) CHECK(d == 30);
  CHECK(cost_ratio(plan).ratio == doctest::Approx(1.0));
}

TEST_CASE("planner schedule for cauchy(100), m = 64, 64 digits") {
  const PrecisionCtx ctx(64);
  const MPMatrix x = gen_cauchy(100, ctx);
  MixedOptions opts;
  opts.plan_only = true;
  const auto report = ps_mixed_general(x, taylor_exp_coeffs(64), ctx, opts);
  const std::vector<int> expect{61, 55, 47, 38, 28, 18, 7, 1};
  CHECK(report.plan.level_digits == expect);
  CHECK(report.plan.nu == 1);
  CHECK(report.cost_ratio == doctest::Approx(703.0 / 960.0));
  CHECK(report.result.is_zero());

  // raw u_{i-1} - raw u_i = log10 tau_i, with raw u_0 = -d.
  double previous = -64.0;
  for (int i = 1; i <= report.plan.r; ++i) {
    const double raw = report.plan.raw_log10_u[static_cast<std::size_t>(i - 1)];
    CHECK(previous - raw ==
          doctest::Approx(report.plan.tau[static_cast<std::size_t>(i - 1)].log10_abs()));
    previous = raw;
  }
}

TEST_CASE("a zero block is recorded as degenerate") {
  const PrecisionCtx ctx(20);
  const mpfr_prec_t bits = ctx.bits();
  const std::vector<Real> norms{Real(1L, bits), Real(bits), Real(1e-3, bits)};
  const auto plan = plan_precisions(norms, Real(0.1, bits), 2, ctx, 10.0);
  REQUIRE(plan.degenerate_levels.size() == 1);
  CHECK(plan.degenerate_levels[0] == 1);
  CHECK(std::isinf(plan.raw_log10_u[0]));
  CHECK(plan.level_digits[0] >= plan.level_digits[1]);
}

TEST_CASE("planner argument validation") {
  const PrecisionCtx ctx(20);
  const std::vector<Real> none;
  CHECK_THROWS_AS(plan_precisions(none, Real(1L, 64), 2, ctx, 10.0), InvalidArgument);
  const std::vector<Real> one{Real(1L, 64), Real(1L, 64)};
  CHECK_THROWS_AS(plan_precisions(one, Real(1L, 64), 2, ctx, 0.5), InvalidArgument);
}

TEST_CASE("snap_to_lattice") {
  EvaluationPlan plan;
  plan.r = 4;
  plan.working_digits = 64;
  plan.level_digits = {50, 33, 16, 1};
  const std::vector<int> lattice{64, 32, 16, 8};
  const auto snapped = snap_to_lattice(plan, lattice);
  CHECK(snapped.level_digits == std::vector<int>{64, 64, 16, 8});
  const std::vector<int> missing{32, 16};
  CHECK_THROWS_AS(snap_to_lattice(plan, missing), InvalidArgument);
  CHECK_THROWS_AS(snap_to_lattice(plan, std::vector<int>{}), InvalidArgument);
}

TEST_CASE("horner_mixed edge cases") {
  const PrecisionCtx ctx(20);
  const MPMatrix b0 = random_matrix(3, 1.0, 1, ctx);
  EvaluationPlan plan;
  plan.r = 0;
  plan.working_digits = 20;
  const std::vector<MPMatrix> single{b0};
  CHECK(horner_mixed(single, b0, plan).identical(b0));

  const std::vector<MPMatrix> two{b0, b0};
  CHECK_THROWS_AS(horner_mixed(two, b0, plan), InvalidArgument);
  plan.r = 1;
  plan.level_digits = {20};
  CHECK_THROWS_AS(horner_mixed(two, MPMatrix::identity(2, ctx), plan), DimensionError);
}

TEST_CASE("an all-working plan reproduces the fixed evaluator bitwise") {
  const PrecisionCtx ctx(40);
  const MPMatrix x = random_matrix(5, 0.4, 21, ctx);
  const auto series = taylor_exp_coeffs(20);
  const auto fixed = ps_fixed(x, series, ctx);
  // delta so large that no level may be lowered.
  const auto mixed = ps_mixed_general(x, series, ctx, 1e60);
  CHECK(mixed.plan.nu == mixed.plan.r + 1);
  CHECK(mixed.result.identical(fixed.result));
  CHECK(fixed.total_matmuls() == fixed.plan.s - 1 + fixed.plan.r);
}

TEST_CASE("equal coefficients with ||Y|| >= 1 give a working-precision plan") {
  const PrecisionCtx ctx(30);
  const MPMatrix x = mat_add(MPMatrix::identity(4, ctx), random_matrix(4, 0.1, 8, ctx), ctx);
  std::vector<mpq_class> ones(16, mpq_class(1));
  const auto series = custom_series(ones);
  const auto mixed = ps_mixed_general(x, series, ctx);
  CHECK(mixed.plan.norm_Y >= Real(1L, 64));
  CHECK(mixed.plan.nu == mixed.plan.r + 1);
  CHECK(mixed.result.identical(ps_fixed(x, series, ctx).result));
}

TEST_CASE("a hand-written schedule stays within the Horner bound") {
  const PrecisionCtx work(16);
  const PrecisionCtx oracle(64);
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<MPMatrix> blocks;
    for (int i = 0; i <= 3; ++i) blocks.push_back(random_matrix(4, std::pow(0.1, i), gen(), work));
    const MPMatrix y = random_matrix(4, 0.05, gen(), work);

    EvaluationPlan plan;
    plan.s = 2;
    plan.r = 3;
    plan.working_digits = 16;
    plan.level_digits = {10, 5, 2};
    for (const auto& b : blocks) plan.norm_B.push_back(one_norm(b));
    plan.norm_Y = one_norm(y);

    EvaluationPlan exact = plan;
    exact.working_digits = 64;
    exact.level_digits = {64, 64, 64};

    std::map<int, int> counts;
    const MPMatrix got = horner_mixed(blocks, y, plan, &counts);
    const MPMatrix ref = horner_mixed(blocks, y, exact);
    CHECK(counts == std::map<int, int>{{10, 1}, {5, 1}, {2, 1}});
    const Real err = one_norm(mat_sub(got, ref, oracle), oracle);
    CHECK(err <= horner_bound(plan, 4));
  }
}

TEST_CASE("mixed exponential accuracy on a 1x1 argument") {
  const PrecisionCtx ctx(32);
  const MPMatrix a = MPMatrix::from_doubles(1, 1, std::vector<double>{0.9}, ctx);
  const auto report = ps_mixed_exp(a, 20, ctx);
  const MPMatrix oracle(1, 1, {scalar_exp_taylor(0.9, 20, 400)}, {}, PrecisionCtx(120));
  const int r = report.plan.r;
  CHECK(rel_err(report.result, oracle) <= 10.0 * r * 1e-32);
  CHECK(report.plan.level_digits.back() < 32);
}

TEST_CASE("cosine polynomial at X^2 stays within 10 r n u") {
  const PrecisionCtx ctx(32);
  const PrecisionCtx wide(128);
  MPMatrix x = random_matrix(8, 1.0, 12, wide);
  x = scale_pow2(x, 4);
  const auto series = taylor_cos_coeffs(12);
  const auto mixed = ps_mixed_general(mat_mul(x, x, ctx), series, ctx);
  const auto ref = ps_fixed(mat_mul(x, x, wide), series, wide);
  const double bound = 10.0 * mixed.plan.r * 8 * 1e-32;
  CHECK(rel_err(mixed.result, ref.result, 260) <= bound);
}

TEST_CASE("cost ratio") {
  EvaluationPlan plan;
  plan.m = 64;
  plan.s = 8;
  plan.r = 8;
  plan.working_digits = 64;
  plan.level_digits = {61, 55, 47, 38, 28, 18, 7, 1};
  const auto c = cost_ratio(plan);
  CHECK(c.ratio == doctest::Approx(703.0 / 960.0));
  CHECK(c.savings == doctest::Approx(257.0 / 960.0));

  plan.level_digits.assign(8, 64);
  CHECK(cost_ratio(plan).ratio == doctest::Approx(1.0));
  plan.s = 64;
  plan.r = 1;
  plan.level_digits = {1};
  CHECK(cost_ratio(plan).ratio == 1.0);
}

TEST_CASE("matmul accounting of a mixed run") {
  const PrecisionCtx ctx(64);
  const MPMatrix x = gen_cauchy(10, ctx);
  const auto report = ps_mixed_exp(x, 30, ctx);
  CHECK(report.total_matmuls() == report.plan.s - 1 + report.plan.r);
  int at_working = 0;
  for (const auto& [d, count] : report.matmuls_by_digits) {
    CHECK(d <= 64);
    if (d == 64) at_working += count;
  }
  CHECK(at_working >= report.plan.s - 1);
  CHECK(report.algorithm == "mixed_exp_fixed_s");
}

TEST_CASE("variable block size grows s when powers stay large") {
  const PrecisionCtx ctx(32);
  const MPMatrix a = MPMatrix::from_doubles(1, 1, std::vector<double>{-2.0}, ctx);
  const auto grown = ps_mixed_exp(a, 30, ctx, false, 10.0);
  CHECK(grown.algorithm == "mixed_exp_variable_s");
  CHECK(grown.plan.s > default_block_size(30));
  CHECK(grown.plan.delta == 1.0);
  CHECK_FALSE(grown.plan.fix_params);
  const MPMatrix oracle(1, 1, {scalar_exp_taylor(-2.0, 30, 400)}, {}, PrecisionCtx(120));
  CHECK(rel_err(grown.result, oracle) <= 10.0 * grown.plan.r * 1e-32 * 100);

  // ||X|| > s/e: fall back to the fixed block size.
  const MPMatrix big = MPMatrix::from_doubles(1, 1, std::vector<double>{5.0}, ctx);
  const auto fallback = ps_mixed_exp(big, 30, ctx, false, 10.0);
  CHECK(fallback.algorithm == "mixed_exp_fixed_s");
  CHECK(fallback.plan.s == default_block_size(30));
}

TEST_CASE("bound and diagnostics attach on request") {
  const PrecisionCtx ctx(34);
  const MPMatrix x = scale_pow2(gen_ward(ctx), 6);
  MixedOptions opts;
  opts.compute_bound = true;
  const auto report = ps_mixed_general(x, pade_exp_coeffs(13, 13).first, ctx, opts);
  REQUIRE(report.bound.has_value());
  CHECK(report.bound->sign() > 0);
  CHECK(report.diagnostics.has_value());
  CHECK(report.timing.total_seconds >= 0.0);
  const double shares = report.timing.power + report.timing.norm_estimation +
                        report.timing.mixed_horner + report.timing.coefficient_assembly;
  CHECK(shares == doctest::Approx(1.0));
}
