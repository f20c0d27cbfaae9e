#include "mpps/mpps.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "mpps/acceptance.hpp"
#include "mpps/errors.hpp"
#include "mpps/harness.hpp"
#include "mpps/io.hpp"

struct mpps_matrix {
  mpps::MPMatrix value;
};

struct mpps_series {
  mpps::CoefficientSeries value;
};

struct mpps_report {
  mpps::EvaluationReport value;
};

namespace {

thread_local std::string last_error;

mpps_status fail(mpps_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <typename F>
mpps_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const mpps::DimensionError& e) {
    return fail(MPPS_ERR_DIMENSION, e.what());
  } catch (const mpps::InvalidArgument& e) {
    return fail(MPPS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const mpps::IoError& e) {
    return fail(MPPS_ERR_IO, e.what());
  } catch (const mpps::BoundInvalid& e) {
    return fail(MPPS_ERR_NUMERICAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(MPPS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MPPS_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) throw mpps::InvalidArgument(what);
}

mpps::ExperimentConfig to_config(const mpps_experiment& e) {
  mpps::ExperimentConfig cfg;
  require(e.matrix != nullptr, "experiment has no matrix");
  cfg.matrix.name = e.matrix;
  cfg.matrix.n = e.n;
  cfg.matrix.seed = e.seed;
  cfg.matrix.triu_scale = e.triu_scale;
  cfg.matrix.ell = e.scale_l;
  cfg.matrix.normalize = e.normalize != 0;
  cfg.series.family = e.series != nullptr ? e.series : "taylor_exp";
  cfg.series.m = e.m;
  if (e.series_path != nullptr) cfg.series.path = e.series_path;
  cfg.digits = e.digits;
  cfg.delta = e.delta;
  cfg.fix_params = e.fix_params != 0;
  if (e.lattice != nullptr) cfg.lattice.assign(e.lattice, e.lattice + e.lattice_len);
  cfg.compute_bound = e.compute_bound != 0;
  require(cfg.matrix.n >= 1, "n must be >= 1");
  require(cfg.series.m >= 1, "m must be >= 1");
  require(cfg.digits >= 1, "digits must be >= 1");
  require(cfg.delta >= 1.0, "delta must be >= 1");
  return cfg;
}

nlohmann::json record_json(const mpps::ComparisonRecord& rec) {
  return {{"matrix", rec.matrix_id},
          {"series", rec.series},
          {"n", rec.n},
          {"m", rec.m},
          {"digits", rec.digits},
          {"seed", rec.seed},
          {"scale_l", rec.ell},
          {"eps_v", rec.eps_v.to_string(6)},
          {"eps_f", rec.eps_f.to_string(6)},
          {"rnu", rec.rnu.to_string(6)},
          {"savings", rec.savings},
          {"plan", mpps::plan_to_json(rec.plan)}};
}

}  // namespace

extern "C" {

const char* mpps_version(void) { return "1.0.0"; }

const char* mpps_last_error(void) { return last_error.c_str(); }

const char* mpps_status_name(mpps_status status) {
  switch (status) {
    case MPPS_OK: return "ok";
    case MPPS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MPPS_ERR_DIMENSION: return "dimension mismatch";
    case MPPS_ERR_IO: return "i/o error";
    case MPPS_ERR_NUMERICAL: return "numerical precondition failed";
    case MPPS_ERR_ACCEPTANCE: return "acceptance failure";
    case MPPS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void mpps_string_free(char* s) { std::free(s); }

void mpps_experiment_defaults(mpps_experiment* exp) {
  if (exp == nullptr) return;
  *exp = mpps_experiment{};
  exp->matrix = "cauchy";
  exp->n = 8;
  exp->seed = 1;
  exp->triu_scale = 100.0;
  exp->series = "taylor_exp";
  exp->m = 16;
  exp->digits = 32;
  exp->delta = 10.0;
  exp->fix_params = 1;
}

mpps_status mpps_matrix_from_experiment(const mpps_experiment* exp, mpps_matrix** out) {
  return guarded([&] {
    require(exp != nullptr && out != nullptr, "null argument");
    const auto cfg = to_config(*exp);
    *out = new mpps_matrix{mpps::make_matrix(cfg.matrix, mpps::PrecisionCtx(cfg.digits))};
    return MPPS_OK;
  });
}

mpps_status mpps_matrix_from_doubles(size_t rows, size_t cols, const double* re,
                                     const double* im, int digits, mpps_matrix** out) {
  return guarded([&] {
    require(re != nullptr && out != nullptr, "null argument");
    const std::size_t count = rows * cols;
    std::span<const double> im_span;
    if (im != nullptr) im_span = std::span<const double>(im, count);
    *out = new mpps_matrix{mpps::MPMatrix::from_doubles(
        rows, cols, std::span<const double>(re, count), mpps::PrecisionCtx(digits), im_span)};
    return MPPS_OK;
  });
}

mpps_status mpps_matrix_load(const char* path, int digits, mpps_matrix** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new mpps_matrix{mpps::load_matrix(path, mpps::PrecisionCtx(digits))};
    return MPPS_OK;
  });
}

mpps_status mpps_matrix_save(const mpps_matrix* m, const char* path, const char* format) {
  return guarded([&] {
    require(m != nullptr && path != nullptr, "null argument");
    mpps::save_matrix(path, m->value, format != nullptr ? format : "json");
    return MPPS_OK;
  });
}

mpps_status mpps_matrix_to_string(const mpps_matrix* m, const char* format, char** out) {
  return guarded([&] {
    require(m != nullptr && out != nullptr, "null argument");
    const std::string f = format != nullptr ? format : "json";
    if (f == "csv") {
      *out = dup_string(mpps::matrix_to_csv(m->value));
    } else if (f == "json") {
      *out = dup_string(mpps::matrix_to_json(m->value).dump(2));
    } else {
      throw mpps::InvalidArgument("unknown format '" + f + "'");
    }
    return MPPS_OK;
  });
}

size_t mpps_matrix_rows(const mpps_matrix* m) { return m != nullptr ? m->value.rows() : 0; }
size_t mpps_matrix_cols(const mpps_matrix* m) { return m != nullptr ? m->value.cols() : 0; }

int mpps_matrix_digits(const mpps_matrix* m) {
  return m != nullptr ? m->value.produced_at().digits() : 0;
}

mpps_status mpps_matrix_get(const mpps_matrix* m, size_t i, size_t j, double* re, double* im) {
  return guarded([&] {
    require(m != nullptr, "null matrix");
    if (i >= m->value.rows() || j >= m->value.cols()) {
      throw mpps::DimensionError("index out of range");
    }
    if (re != nullptr) *re = m->value.re(i, j).to_double();
    if (im != nullptr) *im = m->value.is_real() ? 0.0 : m->value.im(i, j).to_double();
    return MPPS_OK;
  });
}

mpps_status mpps_matrix_one_norm(const mpps_matrix* m, double* out) {
  return guarded([&] {
    require(m != nullptr && out != nullptr, "null argument");
    *out = mpps::one_norm(m->value).to_double();
    return MPPS_OK;
  });
}

int mpps_matrix_identical(const mpps_matrix* a, const mpps_matrix* b) {
  if (a == nullptr || b == nullptr) return 0;
  return a->value.identical(b->value) ? 1 : 0;
}

void mpps_matrix_free(mpps_matrix* m) { delete m; }

mpps_status mpps_series_make(const char* family, int m, mpps_series** out) {
  return guarded([&] {
    require(family != nullptr && out != nullptr, "null argument");
    mpps::SeriesSpec spec;
    spec.family = family;
    spec.m = m;
    *out = new mpps_series{mpps::make_series(spec)};
    return MPPS_OK;
  });
}

mpps_status mpps_series_load(const char* path, mpps_series** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new mpps_series{mpps::load_series(path)};
    return MPPS_OK;
  });
}

mpps_status mpps_series_to_json(const mpps_series* s, char** out) {
  return guarded([&] {
    require(s != nullptr && out != nullptr, "null argument");
    *out = dup_string(mpps::series_to_json(s->value).dump(2));
    return MPPS_OK;
  });
}

int mpps_series_degree(const mpps_series* s) { return s != nullptr ? s->value.degree() : -1; }

void mpps_series_free(mpps_series* s) { delete s; }

mpps_status mpps_evaluate(const mpps_matrix* x, const mpps_series* s,
                          const mpps_experiment* settings, int plan_only, mpps_report** out) {
  return guarded([&] {
    require(x != nullptr && s != nullptr && settings != nullptr && out != nullptr,
            "null argument");
    mpps::ExperimentConfig cfg = to_config(*settings);
    cfg.series.path.clear();
    *out = new mpps_report{mpps::evaluate(cfg, x->value, s->value, plan_only != 0)};
    return MPPS_OK;
  });
}

mpps_status mpps_evaluate_fixed(const mpps_matrix* x, const mpps_series* s, int digits,
                                mpps_report** out) {
  return guarded([&] {
    require(x != nullptr && s != nullptr && out != nullptr, "null argument");
    const mpps::PrecisionCtx ctx(digits);
    const mpps::MPMatrix arg = mpps::series_argument(x->value, s->value, ctx);
    *out = new mpps_report{mpps::ps_fixed(arg, s->value, ctx)};
    return MPPS_OK;
  });
}

mpps_status mpps_report_result(const mpps_report* r, mpps_matrix** out) {
  return guarded([&] {
    require(r != nullptr && out != nullptr, "null argument");
    *out = new mpps_matrix{r->value.result};
    return MPPS_OK;
  });
}

mpps_status mpps_report_to_json(const mpps_report* r, int include_result, char** out) {
  return guarded([&] {
    require(r != nullptr && out != nullptr, "null argument");
    *out = dup_string(mpps::report_to_json(r->value, include_result != 0).dump(2));
    return MPPS_OK;
  });
}

double mpps_report_savings(const mpps_report* r) { return r != nullptr ? r->value.savings : 0.0; }

int mpps_report_matmuls(const mpps_report* r) {
  return r != nullptr ? r->value.total_matmuls() : 0;
}

void mpps_report_free(mpps_report* r) { delete r; }

mpps_status mpps_compare(const mpps_experiment* exp, char** json_out) {
  return guarded([&] {
    require(exp != nullptr && json_out != nullptr, "null argument");
    *json_out = dup_string(record_json(mpps::run_compare(to_config(*exp))).dump(2));
    return MPPS_OK;
  });
}

mpps_status mpps_table1(const mpps_experiment* exp, const int* digits, size_t n_digits,
                        const int* ms, size_t n_ms, char** json_out) {
  return guarded([&] {
    require(exp != nullptr && digits != nullptr && json_out != nullptr, "null argument");
    const auto cfg = to_config(*exp);
    const std::vector<int> digit_list(digits, digits + n_digits);
    const std::vector<int> m_list = ms != nullptr ? std::vector<int>(ms, ms + n_ms)
                                                  : mpps::table1_default_degrees(digit_list);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : mpps::run_table1(cfg, digit_list, m_list)) {
      rows.push_back({{"digits", row.digits},
                      {"m", row.m},
                      {"s", row.s},
                      {"r", row.r},
                      {"nu", row.nu},
                      {"schedule", row.schedule},
                      {"cost_ratio", row.cost_ratio},
                      {"savings", row.savings}});
    }
    *json_out = dup_string(rows.dump(2));
    return MPPS_OK;
  });
}

mpps_status mpps_verify(uint64_t seed, int criterion, char** json_out) {
  return guarded([&] {
    require(json_out != nullptr, "null argument");
    mpps::AcceptanceOptions opts;
    if (seed != 0) opts.seed = seed;
    std::vector<mpps::CriterionResult> results;
    if (criterion == 0) {
      results = mpps::run_acceptance(opts);
    } else {
      results.push_back(mpps::run_criterion(criterion, opts));
    }
    nlohmann::json arr = nlohmann::json::array();
    bool all = true;
    for (const auto& r : results) {
      all = all && r.passed;
      arr.push_back({{"id", r.id},
                     {"name", r.name},
                     {"passed", r.passed},
                     {"detail", r.detail},
                     {"seconds", r.seconds}});
    }
    *json_out = dup_string(arr.dump(2));
    if (!all) return fail(MPPS_ERR_ACCEPTANCE, "acceptance criteria failed");
    return MPPS_OK;
  });
}

}  // extern "C"
