#pragma once

// Inverse Funk–Hecke transform for the kernel |<x,ξ>|^q: given an even H on
// the sphere, the density b_H with H(x) = ∫ |<x,ξ>|^q b_H(ξ) dξ.

#include "lqembed/harmonics.hpp"

namespace lqembed {

struct DensityResult {
  HarmonicCoefficients coefficients;
  double q = 0.0;
  int r = 0;
  int M_used = 0;
  double truncation_bound = 0.0;  // sup-norm bound on the discarded part of the series
  double uniform_bound = 0.0;     // K(q)‖H‖ + L(q)‖Δ^r H‖
};

/// b_H coefficients λ_m^{-1}(H, Y_mj) for even m <= M.
///
/// truncation_bound covers the degrees of H above M that are present in the
/// expansion (Cauchy–Schwarz with the addition theorem, per degree). If H is
/// flagged projected, an estimate of the energy beyond H.max_degree() is added
/// (see residual_tail_estimate). For an exact band-limited H of degree <= M the
/// bound is exactly 0.
///
/// Throws HypothesisViolation if H is not even or 2r <= n + q, DomainError for odd
/// or negative M, ConditioningError if some |λ_m| underflows.
DensityResult invert(const HarmonicCoefficients& H, double q, int r, int M);

/// Sup-norm estimate of Σ_{even m > H.max_degree()} λ_m^{-1} P_m H from geometric
/// extrapolation of the trailing per-degree norms of H. Falls back to
/// L-tail · ‖Δ^r H‖ when the trailing norms do not decay.
double residual_tail_estimate(const HarmonicCoefficients& H, double q, int r);

/// K(q)‖H‖ + L(q)‖Δ^r H‖.
double uniform_bound(const HarmonicCoefficients& H, double q, int r);

/// Funk–Hecke image of an even density: coefficient-wise multiplication by λ_m.
HarmonicCoefficients forward(const HarmonicCoefficients& b, double q);

/// Smallest r with 2r > n + q_max + 1.
int auto_smoothness(int n, double q_max);

}  // namespace lqembed
