// Command-line front end over the C interface.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mpps/mpps.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitAcceptance = 4;

struct Options {
  std::string matrix = "cauchy";
  int n = 8;
  std::uint64_t seed = 1;
  double triu_scale = 100.0;
  long scale_l = 0;
  bool normalize = false;
  std::string series = "taylor_exp";
  std::string series_file;
  int m = 16;
  int digits = 32;
  double delta = 10.0;
  bool fix_params = true;
  std::vector<int> lattice;
  bool bound = false;
  std::string out;
  std::string format = "json";
  std::vector<int> digits_list{32, 64, 128, 256};
  std::vector<int> m_list;
  int criterion = 0;
};

// Thrown after a C call fails; carries the exit code.
struct CliFailure {
  int code;
};

int exit_code_for(mpps_status status) {
  switch (status) {
    case MPPS_OK: return kExitOk;
    case MPPS_ERR_INVALID_ARGUMENT:
    case MPPS_ERR_DIMENSION:
    case MPPS_ERR_IO: return kExitUsage;
    case MPPS_ERR_NUMERICAL: return kExitNumerical;
    case MPPS_ERR_ACCEPTANCE: return kExitAcceptance;
    case MPPS_ERR_INTERNAL: break;
  }
  return kExitInternal;
}

void check(mpps_status status) {
  if (status == MPPS_OK) return;
  std::cerr << "error: " << mpps_status_name(status) << ": " << mpps_last_error() << "\n";
  throw CliFailure{exit_code_for(status)};
}

std::string take(char* s) {
  std::string out = s != nullptr ? s : "";
  mpps_string_free(s);
  return out;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot write '" << o.out << "'\n";
    throw CliFailure{kExitUsage};
  }
  file << text;
  if (!text.empty() && text.back() != '\n') file << '\n';
}

mpps_experiment experiment(const Options& o) {
  mpps_experiment e;
  mpps_experiment_defaults(&e);
  e.matrix = o.matrix.c_str();
  e.n = o.n;
  e.seed = o.seed;
  e.triu_scale = o.triu_scale;
  e.scale_l = o.scale_l;
  e.normalize = o.normalize ? 1 : 0;
  e.series = o.series.c_str();
  e.m = o.m;
  e.series_path = o.series_file.empty() ? nullptr : o.series_file.c_str();
  e.digits = o.digits;
  e.delta = o.delta;
  e.fix_params = o.fix_params ? 1 : 0;
  e.lattice = o.lattice.empty() ? nullptr : o.lattice.data();
  e.lattice_len = o.lattice.size();
  e.compute_bound = o.bound ? 1 : 0;
  return e;
}

struct Handles {
  mpps_matrix* x = nullptr;
  mpps_series* s = nullptr;
  mpps_report* report = nullptr;
  mpps_matrix* result = nullptr;
  ~Handles() {
    mpps_matrix_free(result);
    mpps_report_free(report);
    mpps_series_free(s);
    mpps_matrix_free(x);
  }
};

void run_evaluation(const Options& o, Handles& h, bool plan_only) {
  const mpps_experiment e = experiment(o);
  check(mpps_matrix_from_experiment(&e, &h.x));
  if (o.series_file.empty()) {
    check(mpps_series_make(o.series.c_str(), o.m, &h.s));
  } else {
    check(mpps_series_load(o.series_file.c_str(), &h.s));
  }
  check(mpps_evaluate(h.x, h.s, &e, plan_only ? 1 : 0, &h.report));
}

std::string join(const json& values, const char* sep) {
  std::string out;
  for (const auto& v : values) {
    if (!out.empty()) out += sep;
    out += v.is_string() ? v.get<std::string>() : v.dump();
  }
  return out;
}

int cmd_eval(const Options& o) {
  Handles h;
  run_evaluation(o, h, false);
  check(mpps_report_result(h.report, &h.result));
  if (!o.out.empty()) {
    check(mpps_matrix_save(h.result, o.out.c_str(), o.format.c_str()));
    std::cout << take([&] {
      char* s = nullptr;
      check(mpps_report_to_json(h.report, 0, &s));
      return s;
    }()) << "\n";
    return kExitOk;
  }
  char* text = nullptr;
  if (o.format == "csv") {
    check(mpps_matrix_to_string(h.result, "csv", &text));
    std::cout << take(text);
    check(mpps_report_to_json(h.report, 0, &text));
    std::cerr << take(text) << "\n";
  } else {
    check(mpps_report_to_json(h.report, 1, &text));
    std::cout << take(text) << "\n";
  }
  return kExitOk;
}

int cmd_plan(const Options& o) {
  Handles h;
  run_evaluation(o, h, true);
  char* text = nullptr;
  check(mpps_report_to_json(h.report, 0, &text));
  const json report = json::parse(take(text));
  const json& plan = report.at("plan");
  if (o.format == "csv") {
    std::ostringstream out;
    out << "# s=" << plan.at("s") << " r=" << plan.at("r") << " nu=" << plan.at("nu")
        << " working_digits=" << plan.at("working_digits") << " savings=" << report.at("savings")
        << "\n";
    out << "level,digits,tau\n";
    const auto& digits = plan.at("level_digits");
    const auto& tau = plan.at("tau");
    for (std::size_t i = 0; i < digits.size(); ++i) {
      out << i + 1 << ',' << digits[i].dump() << ',' << tau[i].get<std::string>() << "\n";
    }
    emit(o, out.str());
  } else {
    json doc = {{"plan", plan},
                {"cost_ratio", report.at("cost_ratio")},
                {"savings", report.at("savings")}};
    if (report.contains("diagnostics")) doc["diagnostics"] = report.at("diagnostics");
    emit(o, doc.dump(2));
  }
  return kExitOk;
}

int cmd_compare(const Options& o) {
  const mpps_experiment e = experiment(o);
  char* text = nullptr;
  check(mpps_compare(&e, &text));
  const std::string doc = take(text);
  if (o.format == "csv") {
    const json rec = json::parse(doc);
    std::ostringstream out;
    out << "matrix,series,n,m,digits,seed,scale_l,eps_v,eps_f,rnu,savings,nu,schedule\n";
    out << rec.at("matrix").get<std::string>() << ',' << rec.at("series").get<std::string>()
        << ',' << rec.at("n") << ',' << rec.at("m") << ',' << rec.at("digits") << ','
        << rec.at("seed") << ',' << rec.at("scale_l") << ',' << rec.at("eps_v").get<std::string>()
        << ',' << rec.at("eps_f").get<std::string>() << ',' << rec.at("rnu").get<std::string>()
        << ',' << rec.at("savings") << ',' << rec.at("plan").at("nu") << ','
        << join(rec.at("plan").at("level_digits"), " ") << "\n";
    emit(o, out.str());
  } else {
    emit(o, doc);
  }
  return kExitOk;
}

int cmd_table1(const Options& o) {
  const mpps_experiment e = experiment(o);
  char* text = nullptr;
  check(mpps_table1(&e, o.digits_list.data(), o.digits_list.size(),
                    o.m_list.empty() ? nullptr : o.m_list.data(), o.m_list.size(), &text));
  const std::string doc = take(text);
  if (o.format == "csv") {
    std::ostringstream out;
    out << "digits,m,s,r,nu,schedule,savings_percent\n";
    for (const auto& row : json::parse(doc)) {
      char pct[32];
      std::snprintf(pct, sizeof pct, "%.1f", 100.0 * row.at("savings").get<double>());
      out << row.at("digits") << ',' << row.at("m") << ',' << row.at("s") << ',' << row.at("r")
          << ',' << row.at("nu") << ',' << join(row.at("schedule"), " ") << ',' << pct << "\n";
    }
    emit(o, out.str());
  } else {
    emit(o, doc);
  }
  return kExitOk;
}

int cmd_verify(const Options& o) {
  char* text = nullptr;
  const mpps_status status = mpps_verify(o.seed, o.criterion, &text);
  if (status != MPPS_OK && status != MPPS_ERR_ACCEPTANCE) check(status);
  const std::string doc = take(text);
  if (o.format == "json") {
    emit(o, doc);
  } else {
    std::ostringstream out;
    for (const auto& r : json::parse(doc)) {
      out << (r.at("passed").get<bool>() ? "PASS" : "FAIL") << "  criterion " << r.at("id")
          << "  " << r.at("name").get<std::string>() << ": " << r.at("detail").get<std::string>()
          << "\n";
    }
    emit(o, out.str());
  }
  return exit_code_for(status);
}

void add_inputs(CLI::App* cmd, Options& o) {
  cmd->add_option("--matrix", o.matrix,
                  "generator (cauchy, ward, nonnormal2, triu_rand, lotkin, smoke) or .json/.csv file");
  cmd->add_option("--n", o.n, "matrix order")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "generator seed");
  cmd->add_option("--triu-scale", o.triu_scale, "entry scale for triu_rand");
  cmd->add_option("--scale-l", o.scale_l, "scale the matrix by 2^-l");
  cmd->add_flag("--normalize", o.normalize, "raise l until ||X||_1 <= 1");
  cmd->add_option("--series", o.series,
                  "taylor_exp | pade_exp_num | pade_exp_den | taylor_cos_in_x_squared");
  cmd->add_option("--series-file", o.series_file, "custom series JSON");
  cmd->add_option("--m", o.m, "series degree")->check(CLI::PositiveNumber);
  cmd->add_option("--digits", o.digits, "working decimal digits")->check(CLI::PositiveNumber);
  cmd->add_option("--delta", o.delta, "switch threshold")->check(CLI::Range(1.0, 1e300));
  cmd->add_flag("--fix-params,!--no-fix-params", o.fix_params,
                "keep s = ceil(sqrt(m)) for the exponential series");
  cmd->add_option("--lattice", o.lattice, "available digit counts, e.g. 8,16,32")->delimiter(',');
  cmd->add_flag("--bound", o.bound, "attach the Horner error bound to the report");
}

void add_output(CLI::App* cmd, Options& o) {
  cmd->add_option("--out", o.out, "output path");
  cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixed-precision Paterson-Stockmeyer evaluation"};
  app.require_subcommand(1);
  Options o;

  auto* eval = app.add_subcommand("eval", "evaluate a matrix polynomial");
  add_inputs(eval, o);
  add_output(eval, o);
  auto* plan = app.add_subcommand("plan", "print the precision schedule only");
  add_inputs(plan, o);
  add_output(plan, o);
  auto* compare = app.add_subcommand("compare", "mixed vs fixed vs 2x-digit reference");
  add_inputs(compare, o);
  add_output(compare, o);
  auto* table1 = app.add_subcommand("table1", "schedules and savings over several precisions");
  add_inputs(table1, o);
  add_output(table1, o);
  table1->add_option("--digits-list", o.digits_list, "working precisions")->delimiter(',');
  table1->add_option("--m-list", o.m_list, "degrees, one or one per precision")->delimiter(',');
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--seed", o.seed, "suite seed (0: built-in)");
  verify->add_option("--criterion", o.criterion, "run one criterion (1-9)")->check(CLI::Range(0, 9));
  verify->add_option("--out", o.out, "output path");
  verify->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*eval) return cmd_eval(o);
    if (*plan) return cmd_plan(o);
    if (*compare) return cmd_compare(o);
    if (*table1) {
      if (table1->count("--n") == 0) o.n = 100;
      if (table1->count("--m") > 0 && o.m_list.empty()) o.m_list = {o.m};
      return cmd_table1(o);
    }
    if (*verify) {
      if (verify->count("--seed") == 0) o.seed = 0;
      if (verify->count("--format") == 0) o.format = "text";
      return cmd_verify(o);
    }
  } catch (const CliFailure& f) {
    return f.code;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed library output: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
