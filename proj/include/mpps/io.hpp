#pragma once

#include <string>

#include <json.hpp>

#include "mpps/coefficients.hpp"
#include "mpps/precision.hpp"
#include "mpps/ps_engine.hpp"

namespace mpps {

// Decimal strings with d+2 significant digits, enough for the binary value
// at d digits to survive a round trip.
std::string format_entry(const Real& value, int digits);

// {"rows", "cols", "digits", "re": [...], "im": [...] (complex only)}.
nlohmann::json matrix_to_json(const MPMatrix& a);
// Entries are parsed at `digits` when given, else at the stored "digits".
MPMatrix matrix_from_json(const nlohmann::json& j, int digits = 0);

// One row per line; complex entries written as "re;im".
std::string matrix_to_csv(const MPMatrix& a);
MPMatrix matrix_from_csv(const std::string& text, const PrecisionCtx& ctx);

// Reads .json or .csv by extension.
MPMatrix load_matrix(const std::string& path, const PrecisionCtx& ctx);
void save_matrix(const std::string& path, const MPMatrix& a, const std::string& format);

// {"family", "variable", "coeffs": ["num/den", ...]}.
nlohmann::json series_to_json(const CoefficientSeries& series);
CoefficientSeries series_from_json(const nlohmann::json& j);
CoefficientSeries load_series(const std::string& path);

nlohmann::json plan_to_json(const EvaluationPlan& plan);
nlohmann::json report_to_json(const EvaluationReport& report, bool include_result);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace mpps
