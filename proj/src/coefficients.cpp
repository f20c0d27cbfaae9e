#include "mpps/coefficients.hpp"

#include <string>

#include "mpps/errors.hpp"

namespace mpps {

namespace {

mpz_class factorial(int n) {
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
  return out;
}

void require_degree(int m, const char* what) {
  if (m < 0) throw InvalidArgument(std::string(what) + ": degree must be >= 0");
}

}  // namespace

std::string to_string(SeriesFamily family) {
  switch (family) {
    case SeriesFamily::taylor_exp: return "taylor_exp";
    case SeriesFamily::pade_exp_num: return "pade_exp_num";
    case SeriesFamily::pade_exp_den: return "pade_exp_den";
    case SeriesFamily::taylor_cos_in_x_squared: return "taylor_cos_in_x_squared";
    case SeriesFamily::custom: return "custom";
  }
  return "custom";
}

SeriesFamily parse_family(std::string_view name) {
  if (name == "taylor_exp" || name == "exp") return SeriesFamily::taylor_exp;
  if (name == "pade_exp_num" || name == "pade-num") return SeriesFamily::pade_exp_num;
  if (name == "pade_exp_den" || name == "pade-den") return SeriesFamily::pade_exp_den;
  if (name == "taylor_cos_in_x_squared" || name == "cos") {
    return SeriesFamily::taylor_cos_in_x_squared;
  }
  if (name == "custom") return SeriesFamily::custom;
  throw InvalidArgument("unknown series family '" + std::string(name) + "'");
}

CoefficientSeries taylor_exp_coeffs(int m) {
  require_degree(m, "taylor_exp_coeffs");
  CoefficientSeries out;
  out.family = SeriesFamily::taylor_exp;
  out.coeffs.reserve(static_cast<std::size_t>(m) + 1);
  mpz_class fact = 1;
  for (int i = 0; i <= m; ++i) {
    if (i > 0) fact *= i;
    out.coeffs.emplace_back(mpz_class(1), fact);
  }
  return out;
}

std::pair<CoefficientSeries, CoefficientSeries> pade_exp_coeffs(int k, int m) {
  require_degree(k, "pade_exp_coeffs");
  require_degree(m, "pade_exp_coeffs");
  const mpz_class total = factorial(k + m);
  CoefficientSeries num;
  num.family = SeriesFamily::pade_exp_num;
  for (int j = 0; j <= k; ++j) {
    mpq_class c(factorial(k + m - j) * factorial(k), total * factorial(j) * factorial(k - j));
    c.canonicalize();
    num.coeffs.push_back(c);
  }
  CoefficientSeries den;
  den.family = SeriesFamily::pade_exp_den;
  for (int j = 0; j <= m; ++j) {
    mpq_class c(factorial(k + m - j) * factorial(m), total * factorial(j) * factorial(m - j));
    c.canonicalize();
    if (j % 2 == 1) c = -c;
    den.coeffs.push_back(c);
  }
  return {std::move(num), std::move(den)};
}

CoefficientSeries taylor_cos_coeffs(int m) {
  require_degree(m, "taylor_cos_coeffs");
  CoefficientSeries out;
  out.family = SeriesFamily::taylor_cos_in_x_squared;
  out.variable = SeriesVariable::x_squared;
  for (int j = 0; j <= m; ++j) {
    mpq_class c(mpz_class(j % 2 == 0 ? 1 : -1), factorial(2 * j));
    c.canonicalize();
    out.coeffs.push_back(c);
  }
  return out;
}

CoefficientSeries custom_series(std::vector<mpq_class> coeffs) {
  if (coeffs.empty()) throw InvalidArgument("custom series needs at least one coefficient");
  CoefficientSeries out;
  out.family = SeriesFamily::custom;
  for (auto& c : coeffs) {
    if (c.get_den() == 0) throw InvalidArgument("coefficient with zero denominator");
    c.canonicalize();
  }
  out.coeffs = std::move(coeffs);
  return out;
}

Real eval_coeff(const mpq_class& q, const PrecisionCtx& ctx) {
  Real out(ctx.bits());
  mpfr_set_q(out.get(), q.get_mpq_t(), MPFR_RNDN);
  return out;
}

}  // namespace mpps
