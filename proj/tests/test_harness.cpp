#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "mpps/errors.hpp"
#include "mpps/generators.hpp"
#include "mpps/harness.hpp"
#include "mpps/io.hpp"

using namespace mpps;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "mpps_test_harness";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("generators") {
  const PrecisionCtx ctx(32);
  const MPMatrix c = gen_cauchy(3, ctx);
  CHECK(c.re(0, 0).to_double() == 0.5);
  CHECK(c.re(2, 1).to_double() == doctest::Approx(0.2));
  CHECK(one_norm(gen_cauchy(100, ctx)).to_double() == doctest::Approx(4.1973).epsilon(1e-4));

  const MPMatrix l = gen_lotkin(2, ctx);
  CHECK(l.re(0, 1).to_double() == 1.0);
  CHECK(l.re(1, 0).to_double() == 0.5);
  CHECK(l.re(1, 1).to_double() == doctest::Approx(1.0 / 3.0));

  const MPMatrix w = gen_ward(ctx);
  CHECK(w.re(1, 0).to_double() == -390.0);
  CHECK(gen_nonnormal2(ctx).re(0, 1).to_double() == 1e6);

  const MPMatrix t = gen_triu_rand(6, 100.0, 4, ctx);
  CHECK(t.identical(gen_triu_rand(6, 100.0, 4, ctx)));
  CHECK_FALSE(t.identical(gen_triu_rand(6, 100.0, 5, ctx)));
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j <= i; ++j) CHECK(t.re(i, j).is_zero());
  }
  MPMatrix p = t;
  for (int k = 1; k < 6; ++k) p = mat_mul(p, t, ctx);
  CHECK(p.is_zero());

  const MPMatrix s = gen_smoke(5, ctx);
  CHECK_FALSE(s.is_real());
  for (std::size_t k = 1; k < 5; ++k) {
    const Real mod = sqrt(s.re(k, k) * s.re(k, k) + s.im(k, k) * s.im(k, k));
    CHECK(mod.to_double() == doctest::Approx(1.0).epsilon(1e-30));
    CHECK(s.re(k - 1, k).to_double() == 1.0);
  }
  CHECK(s.re(4, 0).to_double() == 1.0);
  CHECK_THROWS_AS(gen_cauchy(0, ctx), InvalidArgument);
}

TEST_CASE("normal variates are reproducible and roughly standard") {
  const auto a = normal_variates(20000, 17);
  CHECK(a == normal_variates(20000, 17));
  double mean = 0.0;
  double sq = 0.0;
  for (double v : a) {
    mean += v;
    sq += v * v;
  }
  mean /= a.size();
  CHECK(std::abs(mean) < 0.03);
  CHECK(sq / a.size() == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("make_matrix scaling and normalization") {
  const PrecisionCtx ctx(32);
  MatrixSpec spec;
  spec.name = "ward";
  spec.ell = 6;
  CHECK(make_matrix(spec, ctx).re(0, 0).to_double() == -131.0 / 64.0);
  spec.ell = 0;
  spec.normalize = true;
  long ell = -1;
  const MPMatrix x = make_matrix(spec, ctx, &ell);
  CHECK(ell == 10);
  CHECK(one_norm(x) <= Real(1L, 64));
  CHECK(spec.id() == "ward");

  MatrixSpec bad;
  bad.name = "magic";
  CHECK_THROWS_AS(make_matrix(bad, ctx), InvalidArgument);
  MatrixSpec tri;
  tri.name = "triu_rand";
  tri.n = 5;
  tri.seed = 3;
  CHECK(tri.id() == "triu_rand(5)#3");
}

TEST_CASE("series selection") {
  SeriesSpec spec;
  spec.family = "pade-den";
  spec.m = 6;
  const auto den = make_series(spec);
  CHECK(den.family == SeriesFamily::pade_exp_den);
  CHECK(den[1] == mpq_class(-1, 2));
  spec.family = "cos";
  CHECK(make_series(spec).variable == SeriesVariable::x_squared);
}

TEST_CASE("reference evaluation") {
  const PrecisionCtx ctx(64);
  const auto series = taylor_exp_coeffs(30);
  const MPMatrix zero = MPMatrix::zeros(2, 2, ctx);
  CHECK(reference_eval(zero, series, ctx).identical(MPMatrix::identity(2, ctx)));

  const MPMatrix a = MPMatrix::from_doubles(1, 1, std::vector<double>{0.5}, ctx);
  const MPMatrix ref = reference_eval(a, series, ctx);
  CHECK(ref.produced_at() == ctx);
  Real sum(400);
  Real term(1L, 400);
  for (int k = 0; k <= 30; ++k) {
    sum = sum + term;
    term = term * Real(0.5, 400) / Real(static_cast<long>(k + 1), 400);
  }
  CHECK((abs(ref.re(0, 0) - sum) / sum).to_double() < 1e-63);
}

TEST_CASE("relative error is scale free and zero for identical inputs") {
  const PrecisionCtx ctx(20);
  const MPMatrix a = gen_cauchy(4, ctx);
  CHECK(relative_error(a, a).is_zero());
  const MPMatrix b = mat_scale(Real(1.5, ctx.bits()), a, ctx);
  CHECK(relative_error(b, a).to_double() == doctest::Approx(0.5));
}

TEST_CASE("compare: degenerate plans agree with fixed precision") {
  ExperimentConfig cfg;
  cfg.matrix.name = "cauchy";
  cfg.matrix.n = 6;
  cfg.series.family = "taylor_exp";
  cfg.series.m = 16;
  cfg.digits = 32;
  cfg.delta = 1e40;
  const auto rec = run_compare(cfg);
  CHECK(rec.plan.nu == rec.plan.r + 1);
  CHECK(rec.eps_v == rec.eps_f);
  CHECK(rec.savings == 0.0);
  CHECK(rec.matrix_id == "cauchy(6)");
}

TEST_CASE("compare: Ward Pade numerator at 34 digits") {
  ExperimentConfig cfg;
  cfg.matrix.name = "ward";
  cfg.matrix.ell = 6;
  cfg.series.family = "pade_exp_num";
  cfg.series.m = 13;
  cfg.digits = 34;
  const auto rec = run_compare(cfg);
  CHECK(rec.n == 3);
  CHECK(rec.ell == 6);
  CHECK(rec.plan.s == 4);
  CHECK(rec.plan.r == 3);
  CHECK(rec.savings > 0.0);
  CHECK(rec.eps_v <= Real(10L, 64) * rec.rnu);
}

TEST_CASE("compare: cosine on a normalized lotkin matrix") {
  ExperimentConfig cfg;
  cfg.matrix.name = "lotkin";
  cfg.matrix.n = 8;
  cfg.matrix.normalize = true;
  cfg.series.family = "taylor_cos_in_x_squared";
  cfg.series.m = 15;
  cfg.digits = 32;
  const auto rec = run_compare(cfg);
  CHECK(rec.series == "taylor_cos_in_x_squared");
  CHECK(rec.eps_v <= Real(10L, 64) * rec.rnu);
  CHECK(rec.eps_f <= Real(10L, 64) * rec.rnu);
}

TEST_CASE("table1 rows") {
  ExperimentConfig cfg;
  cfg.matrix.name = "cauchy";
  cfg.matrix.n = 100;
  cfg.series.family = "taylor_exp";
  const auto rows = run_table1(cfg, {64}, table1_default_degrees({64}));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].m == 64);
  CHECK(rows[0].s == 8);
  CHECK(rows[0].r == 8);
  CHECK(rows[0].schedule == std::vector<int>{61, 55, 47, 38, 28, 18, 7, 1});
  CHECK(rows[0].savings == doctest::Approx(257.0 / 960.0));

  // All levels at working precision when delta forbids lowering.
  cfg.delta = 1e70;
  const auto flat = run_table1(cfg, {32, 40}, {20});
  REQUIRE(flat.size() == 2);
  for (const auto& row : flat) CHECK(row.savings == 0.0);

  CHECK_THROWS_AS(table1_default_degrees({48}), InvalidArgument);
  CHECK_THROWS_AS(run_table1(cfg, {32, 64, 128}, {10, 20}), InvalidArgument);
}

TEST_CASE("matrix JSON round trip is bit exact") {
  const PrecisionCtx ctx(40);
  const MPMatrix a = gen_smoke(4, ctx);
  const auto j = matrix_to_json(a);
  CHECK(j["rows"] == 4);
  CHECK(j.contains("im"));
  CHECK(matrix_from_json(j).identical(a));
  const MPMatrix real = gen_lotkin(5, ctx);
  CHECK(matrix_from_json(nlohmann::json::parse(matrix_to_json(real).dump())).identical(real));
}

TEST_CASE("matrix CSV round trip and comments") {
  const PrecisionCtx ctx(25);
  const MPMatrix a = gen_cauchy(3, ctx);
  CHECK(matrix_from_csv(matrix_to_csv(a), ctx).identical(a));
  const MPMatrix z = gen_smoke(3, ctx);
  CHECK(matrix_from_csv(matrix_to_csv(z), ctx).identical(z));
  const MPMatrix parsed = matrix_from_csv("# header\n1, 2\n3, 4\n", ctx);
  CHECK(parsed.re(1, 0).to_double() == 3.0);
  CHECK_THROWS_AS(matrix_from_csv("1,2\n3\n", ctx), IoError);
  CHECK_THROWS_AS(matrix_from_csv("1,abc\n3,4\n", ctx), IoError);
}

TEST_CASE("files on disk") {
  const PrecisionCtx ctx(30);
  const MPMatrix a = gen_lotkin(4, ctx);
  const auto json_path = scratch("a.json").string();
  const auto csv_path = scratch("a.csv").string();
  save_matrix(json_path, a, "json");
  save_matrix(csv_path, a, "csv");
  CHECK(load_matrix(json_path, ctx).identical(a));
  CHECK(load_matrix(csv_path, ctx).identical(a));

  MatrixSpec spec;
  spec.name = json_path;
  CHECK(make_matrix(spec, ctx).identical(a));
  CHECK_THROWS_AS(load_matrix(scratch("missing.json").string(), ctx), IoError);
  write_text_file(scratch("broken.json").string(), "{\"rows\": 2");
  CHECK_THROWS_AS(load_matrix(scratch("broken.json").string(), ctx), IoError);
}

TEST_CASE("series JSON round trip") {
  const auto s = pade_exp_coeffs(7, 7).second;
  const auto back = series_from_json(series_to_json(s));
  CHECK(back.family == s.family);
  CHECK(back.coeffs == s.coeffs);
  const auto path = scratch("series.json").string();
  write_text_file(path, R"({"coeffs": ["1", "1/2", "-3/4"]})");
  const auto custom = load_series(path);
  CHECK(custom.family == SeriesFamily::custom);
  CHECK(custom[2] == mpq_class(-3, 4));
  CHECK_THROWS_AS(series_from_json(nlohmann::json::parse(R"({"coeffs": ["1/0"]})")), InvalidArgument);
  CHECK_THROWS_AS(series_from_json(nlohmann::json::parse(R"({"coeffs": ["x"]})")), IoError);
}

TEST_CASE("report JSON carries the plan") {
  const PrecisionCtx ctx(32);
  const auto report = ps_mixed_exp(gen_cauchy(5, ctx), 20, ctx);
  const auto j = report_to_json(report, true);
  CHECK(j["plan"]["s"] == report.plan.s);
  CHECK(j["plan"]["level_digits"].size() == static_cast<std::size_t>(report.plan.r));
  CHECK(j.contains("result"));
  CHECK_FALSE(report_to_json(report, false).contains("result"));
}
