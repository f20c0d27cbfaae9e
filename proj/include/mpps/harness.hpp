#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mpps/coefficients.hpp"
#include "mpps/ps_engine.hpp"

namespace mpps {

struct MatrixSpec {
  std::string name = "cauchy";  // generator name or a .json/.csv path
  int n = 8;
  std::uint64_t seed = 1;
  double triu_scale = 100.0;
  long ell = 0;                 // X = 2^-ell A
  bool normalize = false;       // raise ell until ||X||_1 <= 1

  std::string id() const;
};

struct SeriesSpec {
  std::string family = "taylor_exp";
  int m = 16;
  std::string path;             // custom series file, overrides family
};

struct ExperimentConfig {
  MatrixSpec matrix;
  SeriesSpec series;
  int digits = 32;
  double delta = 10.0;
  bool fix_params = true;
  std::vector<int> lattice;
  bool compute_bound = false;
};

struct ComparisonRecord {
  std::string matrix_id;
  std::string series;
  int n = 0;
  int m = 0;
  int digits = 0;
  std::uint64_t seed = 0;
  long ell = 0;
  Real eps_v;
  Real eps_f;
  Real rnu;            // r n u
  double savings = 0.0;
  EvaluationPlan plan;
};

struct Table1Row {
  int digits = 0;
  int m = 0;
  int s = 0;
  int r = 0;
  int nu = 0;
  std::vector<int> schedule;
  double cost_ratio = 1.0;
  double savings = 0.0;
};

// Builds the generator matrix at ctx, then applies the 2^-ell scaling.
MPMatrix make_matrix(const MatrixSpec& spec, const PrecisionCtx& ctx, long* ell_used = nullptr);

// Taylor/Pade/cosine degree-m series; Pade is the diagonal [m/m] pair.
CoefficientSeries make_series(const SeriesSpec& spec);

// The argument the polynomial is evaluated at: X, or X^2 for the cosine.
MPMatrix series_argument(const MPMatrix& x, const CoefficientSeries& series,
                         const PrecisionCtx& ctx);

// ps_fixed at 2d digits (argument formed at 2d as well), rounded to d.
MPMatrix reference_eval(const MPMatrix& x, const CoefficientSeries& series,
                        const PrecisionCtx& ctx);

// ||A - B||_1 / ||B||_1, with the difference formed exactly enough.
Real relative_error(const MPMatrix& approx, const MPMatrix& ref);

// Runs the mixed evaluator selected by the config on X (exp with fix_params
// off goes through the variable-s branch).
EvaluationReport evaluate(const ExperimentConfig& cfg, const MPMatrix& x,
                          const CoefficientSeries& series, bool plan_only = false);

ComparisonRecord run_compare(const ExperimentConfig& cfg);

// One planner run per (digits, m) pair; `m_list` may hold a single value
// used for every row.
std::vector<Table1Row> run_table1(const ExperimentConfig& cfg, const std::vector<int>& digits_list,
                                  const std::vector<int>& m_list);

// Default degrees of the cauchy(100) schedule table, keyed by working digits
// (32, 64, 128, 256).
std::vector<int> table1_default_degrees(const std::vector<int>& digits_list);

}  // namespace mpps
