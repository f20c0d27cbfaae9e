#include <doctest.h>

#include <cmath>
#include <random>

#include "mpps/error_bounds.hpp"
#include "mpps/errors.hpp"
#include "mpps/generators.hpp"

using namespace mpps;

namespace {

Real R(double v) { return Real(v, bound_context().bits()); }

std::vector<Real> ladder_from_digits(std::initializer_list<int> digits) {
  std::vector<Real> out;
  for (int d : digits) out.push_back(Real::pow10(-d, bound_context().bits()));
  return out;
}

// Straight transcription of the closed display in doubles.
std::vector<double> f_closed_double(int n, const std::vector<double>& u) {
  std::vector<double> f(u.size());
  f[0] = 2.0;
  for (std::size_t i = 1; i < u.size(); ++i) {
    double middle = 0.0;
    for (std::size_t j = 1; j < i; ++j) middle += u[j];
    f[i] = (n + 2) * u[i] / u[0] + (n + 1) * middle / u[0] + 1.0;
  }
  return f;
}

}  // namespace

TEST_CASE("gamma values and validity") {
  CHECK(gamma(0.0, R(1e-10)).is_zero());
  CHECK(gamma(2.0, R(0.25)).to_double() == doctest::Approx(1.0));
  CHECK(gamma(3.0, R(1e-16)).to_double() == doctest::Approx(3e-16));
  CHECK_THROWS_AS(gamma(4.0, R(0.25)), BoundInvalid);
  CHECK_THROWS_AS(gamma(10.0, R(0.5)), BoundInvalid);

  std::mt19937_64 gen(7);
  for (int t = 0; t < 200; ++t) {
    const int i = 1 + static_cast<int>(gen() % 20);
    const int k = 1 + static_cast<int>(gen() % 50);
    const Real u = R(1e-6);
    CHECK(gamma(static_cast<double>(i), u) * Real(static_cast<long>(k), u.bits()) <=
          gamma(static_cast<double>(i) * k, u));
    // i gamma_k <= gamma_{ik}
    CHECK(Real(static_cast<long>(i), u.bits()) * gamma(static_cast<double>(k), u) <=
          gamma(static_cast<double>(i) * k, u));
  }
}

TEST_CASE("gamma grows with k and u") {
  const Real u = R(1e-8);
  CHECK(gamma(5.0, u) < gamma(6.0, u));
  CHECK(gamma(5.0, R(1e-8)) < gamma(5.0, R(2e-8)));
}

TEST_CASE("single low level gives f_r = (n+2) theta + 1 and f_{r-1} = 2") {
  const int n = 5;
  const auto ladder = ladder_from_digits({30, 12});
  const auto f = f_constants_closed(n, ladder);
  REQUIRE(f.size() == 2);
  CHECK(f[0].to_double() == 2.0);
  CHECK(f[1].to_double() == doctest::Approx(7.0 * 1e18 + 1.0));
}

TEST_CASE("closed f-constants match the recurrence and a double transcription") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(gen() % 40);
    const int len = 2 + static_cast<int>(gen() % 6);
    std::vector<int> digits;
    int d = 40;
    for (int i = 0; i < len; ++i) {
      digits.push_back(d);
      d = std::max(1, d - static_cast<int>(gen() % 9));
    }
    std::vector<Real> ladder;
    std::vector<double> ladder_d;
    for (int di : digits) {
      ladder.push_back(Real::pow10(-di, bound_context().bits()));
      ladder_d.push_back(std::pow(10.0, -di));
    }
    const auto closed = f_constants_closed(n, ladder);
    const auto rec = f_constants_recurrence(n, ladder);
    const auto plain = f_closed_double(n, ladder_d);
    REQUIRE(closed.size() == rec.size());
    for (std::size_t i = 0; i < closed.size(); ++i) {
      const double c = closed[i].to_double();
      CHECK(c == doctest::Approx(rec[i].to_double()).epsilon(1e-25));
      CHECK(c == doctest::Approx(plain[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("equal precisions collapse to the fixed-precision pattern") {
  const int n = 3;
  const auto ladder = ladder_from_digits({20, 20, 20, 20});
  const auto f = f_constants_closed(n, ladder);
  // f_i = (n+2) + (n+1)(i-1) + 1 for i >= 1.
  CHECK(f[0].to_double() == 2.0);
  for (int i = 1; i < 4; ++i) {
    CHECK(f[i].to_double() == doctest::Approx((n + 2) + (n + 1) * (i - 1) + 1));
  }
}

TEST_CASE("thm21 bound equals the hand-written sum") {
  BoundInputs in;
  in.n = 2;
  in.s = 3;
  in.r = 2;
  in.nu = 1;
  in.precisions = ladder_from_digits({20, 15, 10});
  in.norm_Y = R(0.5);
  in.norm_B = {R(2.0), R(0.25), R(0.125)};
  const double u0 = 1e-20;
  const auto f = f_closed_double(2, {1e-20, 1e-15, 1e-10});
  double expect = 0.0;
  const double yb[3] = {2.0, 0.5 * 0.25, 0.25 * 0.125};
  for (int i = 0; i < 3; ++i) expect += f[i] * u0 / (1 - f[i] * u0) * yb[i];
  CHECK(thm21_bound(in).to_double() == doctest::Approx(expect).epsilon(1e-12));

  in.precisions = ladder_from_digits({20, 1, 1});
  in.n = 50;
  CHECK_THROWS_AS(thm21_bound(in), BoundInvalid);
}

TEST_CASE("power and assembly bounds") {
  const Real u = R(1e-10);
  CHECK(power_error_bound(6, 1, u).is_zero());
  CHECK(power_error_bound(6, 2, u).to_double() == doctest::Approx(gamma(6.0, u).to_double()));
  CHECK(power_error_bound(6, 4, u).to_double() == doctest::Approx(gamma(18.0, u).to_double()));

  const std::vector<Real> coeffs{R(1.0)};
  const std::vector<Real> norms{R(1.0)};
  CHECK(assembly_error_bound(coeffs, norms, 4, 1, u).is_zero());

  const std::vector<Real> c3{R(1.0), R(1.0), R(0.5)};
  const std::vector<Real> n3{R(1.0), R(2.0), R(4.0)};
  const double weighted = 1.0 + 2.0 + 2.0;
  CHECK(assembly_error_bound(c3, n3, 4, 3, u).to_double() ==
        doctest::Approx(gamma(6.0, u).to_double() * weighted));
  CHECK(assembly_error_bound_fine(c3, n3, 4, 3, u) <= assembly_error_bound(c3, n3, 4, 3, u));
}

TEST_CASE("tau sequence and flagged levels") {
  const std::vector<Real> flat{R(1.0), R(1.0), R(1.0)};
  const auto t = tau_sequence(flat, R(1.0));
  REQUIRE(t.tau.size() == 2);
  CHECK(t.tau[0].to_double() == 1.0);
  CHECK(t.tau[1].to_double() == 1.0);

  const std::vector<Real> holes{R(1.0), R(0.0), R(3.0)};
  const auto h = tau_sequence(holes, R(2.0));
  CHECK(h.tau[0].is_zero());
  CHECK_FALSE(h.flagged[0]);
  CHECK(h.flagged[1]);
  CHECK_FALSE(h.tau[1].is_finite());
}

TEST_CASE("gamma(s,i) behaviour") {
  const mpfr_prec_t bits = bound_context().bits();
  const Real e = euler_e(bits);
  for (int s = 4; s <= 10; ++s) {
    const Real sigma = Real(static_cast<long>(s), bits) / e;
    double previous = 1e300;
    for (int i = 2; i <= 10; ++i) {
      const double g = gamma_si(s, i, sigma).to_double();
      const double approx = std::exp(1.0) / (std::exp(1.0) - 1.0) * std::pow(i, -s);
      CHECK(g <= 1.2 * approx);
      CHECK(g < previous);
      previous = g;
    }
  }
  // sigma -> 0: s!(is-s)!/(is)!
  const double g0 = gamma_si(3, 2, R(0.0)).to_double();
  CHECK(g0 == doctest::Approx(6.0 * 6.0 / 720.0));
  CHECK_THROWS_AS(gamma_si(3, 1, R(0.5)), InvalidArgument);
  CHECK_THROWS_AS(gamma_si(3, 2, R(2.0)), InvalidArgument);
}

TEST_CASE("gamma(s,i) majorizes tau_i for the scalar exponential") {
  // For X = sigma > 0, B_i = sum_j sigma^j/(si+j)!, Y = sigma^s.
  const int s = 6;
  for (double frac : {0.2, 0.6, 0.999}) {
    const double sigma = frac * s / std::exp(1.0);
    auto block = [&](int i) {
      double acc = 0.0;
      for (int j = 0; j < s; ++j) acc += std::pow(sigma, j) / std::tgamma(s * i + j + 1.0);
      return acc;
    };
    for (int i = 2; i <= 6; ++i) {
      const double tau = block(i) * std::pow(sigma, s) / block(i - 1);
      CHECK(tau <= gamma_si(s, i, R(sigma)).to_double() * (1 + 1e-12));
    }
  }
}

TEST_CASE("alpha_m on the nonnormal example") {
  const PrecisionCtx ctx(32);
  const MPMatrix x = scale_pow2(gen_nonnormal2(ctx), 1);
  const auto a = alpha_m(x, 42);
  CHECK(a.d_star == 7);
  CHECK(a.alpha.to_double() == doctest::Approx(0.6602).epsilon(1e-3));
  CHECK(one_norm(x).to_double() == doctest::Approx(5e5).epsilon(1e-6));

  const auto id = alpha_m(MPMatrix::identity(4, ctx), 10);
  CHECK(id.alpha.to_double() == doctest::Approx(1.0));
  CHECK(alpha_m(MPMatrix::identity(2, ctx), 1).d_star == 2);
}

TEST_CASE("extra squarings") {
  const mpfr_prec_t bits = bound_context().bits();
  CHECK(extra_squarings(R(5e5), 7) == 18);
  CHECK(extra_squarings(R(0.5), 7) == 0);
  const Real two_s_over_e = Real(14L, bits) / euler_e(bits);
  CHECK(extra_squarings(two_s_over_e, 7) == 1);
}

TEST_CASE("y accuracy warning fires for large tau") {
  const Real u = R(1e-20);
  const auto quiet =
      horner_diagnostics(4, 3, R(1e-3), R(1e-3), R(1.0), u, R(1.0), R(1.0));
  CHECK_FALSE(quiet.y_accuracy_warning);
  const auto loud = horner_diagnostics(4, 3, R(0.5), R(0.5), R(1.0), u, R(2.0), R(1e-3));
  CHECK(loud.y_accuracy_warning);
  CHECK(loud.y_accuracy_ratio.to_double() == doctest::Approx(12 * 0.5 * 8 / 1e-3));
}
