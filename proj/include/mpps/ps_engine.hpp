#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mpps/coefficients.hpp"
#include "mpps/error_bounds.hpp"
#include "mpps/precision.hpp"

namespace mpps {

// Paterson-Stockmeyer parameters and the per-level precision schedule.
// Level i = 1..r is stored at index i-1 of level_digits / tau / raw_log10_u.
struct EvaluationPlan {
  int m = 0;
  int s = 1;
  int r = 0;
  int nu = 1;
  int working_digits = 1;
  std::vector<int> level_digits;      // d_1..d_r
  std::vector<double> raw_log10_u;    // log10 of the unclamped u_i
  std::vector<Real> tau;              // tau_1..tau_r
  std::vector<Real> norm_B;           // ||B_0||..||B_r||
  Real norm_Y;
  double delta = 10.0;
  bool fix_params = true;
  std::vector<int> degenerate_levels; // levels whose ||B_i|| is zero
  bool nilpotent = false;             // ||Y|| == 0: p(X) = B_0

  // d_0 = working digits, d_i for i >= 1.
  int digits_at(int level) const;
  // u_i = 10^{-d_i}, i = 0..r.
  Real roundoff_at(int level) const;
  std::vector<Real> roundoff_ladder() const;
};

// Shares of wall time spent in the four evaluation phases.
struct TimingBuckets {
  double power = 0.0;                 // forming X^2..X^s at working precision
  double norm_estimation = 0.0;
  double mixed_horner = 0.0;
  double coefficient_assembly = 0.0;
  double total_seconds = 0.0;
};

struct EvaluationReport {
  explicit EvaluationReport(MPMatrix r) : result(std::move(r)) {}

  MPMatrix result;
  EvaluationPlan plan;
  std::map<int, int> matmuls_by_digits;
  double cost_ratio = 1.0;
  double savings = 0.0;
  TimingBuckets timing;
  std::optional<Real> bound;
  std::string bound_note;
  std::optional<HornerDiagnostics> diagnostics;
  std::string algorithm;

  int total_matmuls() const;
};

struct MixedOptions {
  double delta = 10.0;
  bool fix_params = true;
  std::vector<int> lattice;   // empty: arbitrary digits allowed
  bool compute_bound = false;
  bool plan_only = false;     // stop after planning; result stays zero
};

// X^1..X^s by repeated multiplication (powers[0] = I), the first block
// B_0 = sum_{j<s} b_j X^j accumulated in index order, and Y = X^s.
struct PowersAndB0 {
  std::vector<MPMatrix> powers;
  MPMatrix b0;
  MPMatrix y;
};

PowersAndB0 eval_b0_and_power(const MPMatrix& x, int s, const CoefficientSeries& series,
                              const PrecisionCtx& ctx);

// B_i = sum_j b_{si+j} X^j from precomputed powers (powers[j] = X^j, j < s).
MPMatrix assemble_block(std::span<const MPMatrix> powers, const CoefficientSeries& series,
                        int s, int block, const PrecisionCtx& ctx);

// Digit schedule from the block norms: raw u_i = ||B_0|| u / (||B_i|| ||Y||^i),
// clamped to [u, 1/10], d_i = round(-log10 u_i), switch index
// nu = min{i : u_i >= delta u}, levels below nu at working precision, and
// running maxima so d_1 >= d_2 >= ... >= d_r.
EvaluationPlan plan_precisions(std::span<const Real> norm_B, const Real& norm_Y, int s,
                               const PrecisionCtx& ctx, double delta);

// Each d_i becomes the smallest lattice member >= d_i.
EvaluationPlan snap_to_lattice(const EvaluationPlan& plan, std::span<const int> lattice);

// phi = B_r; for j = r..1: phi = fl_{d_{j-1}}(B_{j-1} + fl_{d_j}(Y phi)).
// `matmuls` (optional) is incremented per product, keyed by digits.
MPMatrix horner_mixed(std::span<const MPMatrix> blocks, const MPMatrix& y,
                      const EvaluationPlan& plan, std::map<int, int>* matmuls = nullptr);

// Fixed-precision Paterson-Stockmeyer with s = ceil(sqrt(m)).
EvaluationReport ps_fixed(const MPMatrix& x, const CoefficientSeries& series,
                          const PrecisionCtx& ctx);

// Mixed-precision evaluation of the degree-m exponential Taylor polynomial.
EvaluationReport ps_mixed_exp(const MPMatrix& x, int m, const PrecisionCtx& ctx,
                              const MixedOptions& options = {});
EvaluationReport ps_mixed_exp(const MPMatrix& x, int m, const PrecisionCtx& ctx,
                              bool fix_params, double delta);

// Mixed-precision evaluation of an arbitrary scalar-coefficient polynomial.
EvaluationReport ps_mixed_general(const MPMatrix& x, const CoefficientSeries& series,
                                  const PrecisionCtx& ctx, const MixedOptions& options = {});
EvaluationReport ps_mixed_general(const MPMatrix& x, const CoefficientSeries& series,
                                  const PrecisionCtx& ctx, double delta);

struct CostRatio {
  double ratio = 1.0;
  double savings = 0.0;
};

// C_r = ((s-1) d + sum_i d_i) / ((s+r-1) d); 1 when s = m (explicit powers).
CostRatio cost_ratio(const EvaluationPlan& plan);

// Bound of the Horner phase for a plan and its measured norms, over the
// full ladder u_0..u_r. Throws BoundInvalid when some gamma is vacuous.
Real horner_bound(const EvaluationPlan& plan, int n);

// ceil(sqrt(m)) without floating point.
int default_block_size(int m);

}  // namespace mpps
