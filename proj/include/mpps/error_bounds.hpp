#pragma once

#include <span>
#include <vector>

#include "mpps/precision.hpp"

namespace mpps {

// Bounds are diagnostics; they are evaluated at 32 decimal digits no matter
// which precisions they describe.
const PrecisionCtx& bound_context();

// gamma_k = k*u / (1 - k*u). Throws BoundInvalid when k*u >= 1.
Real gamma(const Real& k, const Real& u);
Real gamma(double k, const Real& u);

// Inputs of the mixed-precision Horner error bound. `precisions` holds
// u_{nu-1}, u_nu, ..., u_r and `norm_B` the matching ||B_i||.
struct BoundInputs {
  int n = 1;
  int s = 1;
  int r = 0;
  int nu = 1;
  std::vector<Real> precisions;
  Real norm_Y;
  std::vector<Real> norm_B;
  Real sigma;
};

// f-constants of the Horner error bound for a ladder u_{nu-1}..u_r, indexed
// like the ladder (index 0 is f_{nu-1} = 2), from the closed display:
//   f_i = (n+2) u_i/u_{nu-1} + (n+1) (u_{i-1} + ... + u_nu)/u_{nu-1} + 1.
std::vector<Real> f_constants_closed(int n, std::span<const Real> ladder);

// Same constants built level by level, outermost first:
//   f_{b,b} = 2,  f_{b,j} = theta_{b+1,b} (n + f_{b+1,j}) + 1.
std::vector<Real> f_constants_recurrence(int n, std::span<const Real> ladder);

// sum_i gamma^{nu-1}_{f_i} ||Y||^{i-nu+1} ||B_i||.
Real thm21_bound(const BoundInputs& inputs);

// gamma_{(t-1)n}: |fl(X^t) - X^t| <= this * |X|^t for repeated multiplication.
Real power_error_bound(int n, int t, const Real& u);

// Uniform majorant gamma_{(s-2)n+2} * sum_j |b_j| ||(|X|^j)|| for a block
// of s coefficients assembled from precomputed powers. For s = 1 the block
// is b_0 I and the bound is gamma_0 |b_0| = 0.
Real assembly_error_bound(std::span<const Real> abs_coeffs,
                          std::span<const Real> abs_power_norms, int n, int s, const Real& u);

// Per-term form: gamma_{s-1}|b_0| + sum_{j>=1} gamma_{(j-1)(n-1)+s} |b_j| ||(|X|^j)||.
Real assembly_error_bound_fine(std::span<const Real> abs_coeffs,
                               std::span<const Real> abs_power_norms, int n, int s,
                               const Real& u);

struct TauSequence {
  std::vector<Real> tau;        // tau_1..tau_r
  std::vector<bool> flagged;    // ||B_{i-1}|| == 0
};

// tau_i = ||B_i|| ||Y|| / ||B_{i-1}||, i = 1..r. A zero denominator gives
// +inf and sets the level's flag.
TauSequence tau_sequence(std::span<const Real> norm_B, const Real& norm_Y);

// The factorial-ratio majorant of tau_i for the exponential Taylor series
// when ||X||_1 = sigma <= s/e, evaluated at 64 digits.
Real gamma_si(int s, int i, const Real& sigma);

struct AlphaResult {
  Real alpha;
  int d_star = 1;
};

// d* = floor((1 + sqrt(4m+5))/2) and
// alpha = max(||X^d*||^(1/d*), ||X^(d*+1)||^(1/(d*+1))), powers at 16 digits.
AlphaResult alpha_m(const MPMatrix& x, int m);

// max(0, ceil(log2(e ||X|| / s))).
int extra_squarings(const Real& norm_x, int s);

struct HornerDiagnostics {
  // ((1+tau)n + 2) ||B_{nu-1}|| u_{nu-1}; small values license the bound.
  Real small_constant_ratio;
  // s n tau_nu ||X||^s / ||X^s||; a warning is raised when it exceeds 1.
  Real y_accuracy_ratio;
  bool y_accuracy_warning = false;
};

HornerDiagnostics horner_diagnostics(int n, int s, const Real& tau_max, const Real& tau_nu,
                                     const Real& norm_B_base, const Real& u_base,
                                     const Real& norm_x, const Real& norm_Y);

}  // namespace mpps
