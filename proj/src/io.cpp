#include "mpps/io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mpps/errors.hpp"

namespace mpps {

using nlohmann::json;

namespace {

std::string lower_extension(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return {};
  std::string ext = path.substr(dot + 1);
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

json real_json(const Real& x) { return x.to_string(17); }

json reals_json(const std::vector<Real>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(real_json(x));
  return out;
}

}  // namespace

std::string format_entry(const Real& value, int digits) {
  if (value.is_zero()) return mpfr_signbit(value.get()) ? "-0" : "0";
  return value.to_string(digits + 2);
}

json matrix_to_json(const MPMatrix& a) {
  const int d = a.produced_at().digits();
  json j;
  j["rows"] = a.rows();
  j["cols"] = a.cols();
  j["digits"] = d;
  json re = json::array();
  for (const auto& v : a.re_data()) re.push_back(format_entry(v, d));
  j["re"] = std::move(re);
  if (!a.is_real()) {
    json im = json::array();
    for (const auto& v : a.im_data()) im.push_back(format_entry(v, d));
    j["im"] = std::move(im);
  }
  return j;
}

MPMatrix matrix_from_json(const json& j, int digits) {
  try {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const int d = digits > 0 ? digits : j.at("digits").get<int>();
    const PrecisionCtx ctx(d);
    auto parse_all = [&](const json& arr) {
      std::vector<Real> out;
      for (const auto& v : arr) {
        out.push_back(v.is_string() ? Real::parse(v.get<std::string>(), ctx.bits())
                                    : Real(v.get<double>(), ctx.bits()));
      }
      return out;
    };
    std::vector<Real> re = parse_all(j.at("re"));
    std::vector<Real> im;
    if (j.contains("im")) im = parse_all(j.at("im"));
    return MPMatrix(rows, cols, std::move(re), std::move(im), ctx);
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed matrix JSON: ") + e.what());
  }
}

std::string matrix_to_csv(const MPMatrix& a) {
  const int d = a.produced_at().digits();
  std::ostringstream out;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (k > 0) out << ',';
      out << format_entry(a.re(i, k), d);
      if (!a.is_real()) out << ';' << format_entry(a.im(i, k), d);
    }
    out << '\n';
  }
  return out.str();
}

MPMatrix matrix_from_csv(const std::string& text, const PrecisionCtx& ctx) {
  std::vector<Real> re;
  std::vector<Real> im;
  bool complex = false;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::size_t count = 0;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      cell = trim(cell);
      const auto semi = cell.find(';');
      re.push_back(Real::parse(trim(cell.substr(0, semi)), ctx.bits()));
      if (semi != std::string::npos) {
        complex = true;
        im.resize(re.size() - 1, Real(ctx.bits()));
        im.push_back(Real::parse(trim(cell.substr(semi + 1)), ctx.bits()));
      } else if (complex) {
        im.emplace_back(ctx.bits());
      }
      ++count;
    }
    if (rows == 0) cols = count;
    if (count != cols) throw IoError("CSV row " + std::to_string(rows + 1) + " has " +
                                     std::to_string(count) + " entries, expected " +
                                     std::to_string(cols));
    ++rows;
  }
  if (rows == 0) throw IoError("CSV matrix is empty");
  if (complex) im.resize(re.size(), Real(ctx.bits()));
  return MPMatrix(rows, cols, std::move(re), std::move(im), ctx);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

MPMatrix load_matrix(const std::string& path, const PrecisionCtx& ctx) {
  const std::string text = read_text_file(path);
  const std::string ext = lower_extension(path);
  if (ext == "csv") return matrix_from_csv(text, ctx);
  if (ext == "json") {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw IoError("'" + path + "': " + e.what());
    }
    return matrix_from_json(j, ctx.digits());
  }
  throw IoError("'" + path + "': unknown matrix format (expected .json or .csv)");
}

void save_matrix(const std::string& path, const MPMatrix& a, const std::string& format) {
  if (format == "csv") {
    write_text_file(path, matrix_to_csv(a));
  } else if (format == "json") {
    write_text_file(path, matrix_to_json(a).dump(2) + "\n");
  } else {
    throw InvalidArgument("unknown format '" + format + "'");
  }
}

json series_to_json(const CoefficientSeries& series) {
  json j;
  j["family"] = to_string(series.family);
  j["variable"] = series.variable == SeriesVariable::x ? "x" : "x_squared";
  json coeffs = json::array();
  for (const auto& c : series.coeffs) coeffs.push_back(c.get_str());
  j["coeffs"] = std::move(coeffs);
  return j;
}

CoefficientSeries series_from_json(const json& j) {
  try {
    std::vector<mpq_class> coeffs;
    for (const auto& c : j.at("coeffs")) {
      mpq_class q;
      const std::string text = c.is_string() ? c.get<std::string>() : c.dump();
      if (q.set_str(text, 10) != 0) throw IoError("bad rational coefficient '" + text + "'");
      coeffs.push_back(q);
    }
    CoefficientSeries out = custom_series(std::move(coeffs));
    if (j.contains("family")) out.family = parse_family(j.at("family").get<std::string>());
    if (j.contains("variable") && j.at("variable").get<std::string>() == "x_squared") {
      out.variable = SeriesVariable::x_squared;
    }
    return out;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed series JSON: ") + e.what());
  }
}

CoefficientSeries load_series(const std::string& path) {
  try {
    return series_from_json(json::parse(read_text_file(path)));
  } catch (const json::parse_error& e) {
    throw IoError("'" + path + "': " + e.what());
  }
}

json plan_to_json(const EvaluationPlan& plan) {
  json j;
  j["m"] = plan.m;
  j["s"] = plan.s;
  j["r"] = plan.r;
  j["nu"] = plan.nu;
  j["working_digits"] = plan.working_digits;
  j["level_digits"] = plan.level_digits;
  json raw = json::array();
  for (double v : plan.raw_log10_u) {
    if (std::isfinite(v)) {
      raw.push_back(v);
    } else {
      raw.push_back(nullptr);
    }
  }
  j["raw_log10_u"] = std::move(raw);
  j["tau"] = reals_json(plan.tau);
  j["norm_B"] = reals_json(plan.norm_B);
  j["norm_Y"] = real_json(plan.norm_Y);
  j["delta"] = plan.delta;
  j["fix_params"] = plan.fix_params;
  j["degenerate_levels"] = plan.degenerate_levels;
  j["nilpotent"] = plan.nilpotent;
  return j;
}

json report_to_json(const EvaluationReport& report, bool include_result) {
  json j;
  j["algorithm"] = report.algorithm;
  j["plan"] = plan_to_json(report.plan);
  json counts = json::object();
  for (const auto& [digits, count] : report.matmuls_by_digits) {
    counts[std::to_string(digits)] = count;
  }
  j["matmuls_by_digits"] = std::move(counts);
  j["total_matmuls"] = report.total_matmuls();
  j["cost_ratio"] = report.cost_ratio;
  j["savings"] = report.savings;
  j["timing"] = {{"power", report.timing.power},
                 {"norm_estimation", report.timing.norm_estimation},
                 {"mixed_horner", report.timing.mixed_horner},
                 {"coefficient_assembly", report.timing.coefficient_assembly},
                 {"total_seconds", report.timing.total_seconds}};
  if (report.bound) {
    j["bound"] = real_json(*report.bound);
  } else {
    j["bound"] = nullptr;
  }
  if (!report.bound_note.empty()) j["bound_note"] = report.bound_note;
  if (report.diagnostics) {
    j["diagnostics"] = {{"small_constant_ratio", real_json(report.diagnostics->small_constant_ratio)},
                        {"y_accuracy_ratio", real_json(report.diagnostics->y_accuracy_ratio)},
                        {"y_accuracy_warning", report.diagnostics->y_accuracy_warning}};
  }
  if (include_result) j["result"] = matrix_to_json(report.result);
  return j;
}

}  // namespace mpps
