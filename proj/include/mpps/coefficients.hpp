#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mpps/precision.hpp"

namespace mpps {

enum class SeriesFamily { taylor_exp, pade_exp_num, pade_exp_den, taylor_cos_in_x_squared, custom };

// Whether the polynomial is evaluated at X or at X^2 (cosine).
enum class SeriesVariable { x, x_squared };

std::string to_string(SeriesFamily family);
SeriesFamily parse_family(std::string_view name);

// Exact rational coefficients b_0..b_m, kept in canonical (lowest) form.
struct CoefficientSeries {
  SeriesFamily family = SeriesFamily::custom;
  SeriesVariable variable = SeriesVariable::x;
  std::vector<mpq_class> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  const mpq_class& operator[](std::size_t i) const { return coeffs[i]; }
};

// b_i = 1/i!, i = 0..m.
CoefficientSeries taylor_exp_coeffs(int m);

// Numerator and denominator of the [k/m] Pade approximant of exp, both
// normalized to a constant term of 1.
std::pair<CoefficientSeries, CoefficientSeries> pade_exp_coeffs(int k, int m);

// (-1)^j/(2j)!, j = 0..m, a polynomial in X^2.
CoefficientSeries taylor_cos_coeffs(int m);

CoefficientSeries custom_series(std::vector<mpq_class> coeffs);

// Correctly rounded value of q at ctx.
Real eval_coeff(const mpq_class& q, const PrecisionCtx& ctx);

}  // namespace mpps
