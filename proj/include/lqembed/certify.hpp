#pragma once

// Embedding certificates for (norm, q) pairs, the λ-search that yields one
// non-Hilbertian norm embeddable in L_q for every q of a finite sample Q,
// and direct verification of Lévy representations.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lqembed/harmonics.hpp"
#include "lqembed/inversion.hpp"
#include "lqembed/norms.hpp"
#include "lqembed/sphere.hpp"

namespace lqembed {

/// Finite sample of a compact subset of (0, ∞) minus the even integers.
class QSet {
 public:
  /// Sorts and deduplicates; throws DomainError for non-positive samples or an
  /// empty list, ExcludedExponent if a sample is closer than min_guard to an even integer.
  static QSet make(std::vector<double> samples, double min_guard = kDefaultGuard);

  /// count equispaced samples on [lo, hi] (count >= 1).
  static QSet range(double lo, double hi, int count, double min_guard = kDefaultGuard);

  static constexpr double kDefaultGuard = 1e-3;

  const std::vector<double>& samples() const { return samples_; }
  double guard() const { return guard_; }
  double max() const { return samples_.back(); }

 private:
  std::vector<double> samples_;
  double guard_ = 0.0;
};

enum class Verdict { certified_lemma2, certified_positive_density, refuted_negative_density, inconclusive };

std::string to_string(Verdict v);
bool is_certified(Verdict v);

struct EmbeddingCertificate {
  double q = 0.0;
  int r = 0;
  int M = 0;
  double lemma2_lhs = 0.0;  // K(q)‖H-1‖ + L(q)‖Δ^r H‖
  double c_q = 0.0;
  double min_density = 0.0;
  double truncation_bound = 0.0;
  double quadrature_margin = 0.0;  // 10x the quadrature convergence estimate
  double reconstruction_error = 0.0;
  Verdict verdict = Verdict::inconclusive;
  std::uint64_t seed = 0;
};

struct CertifyOptions {
  int verify_points = 20;  // random points for the reconstruction residual
  std::uint64_t seed = 1;
};

/// Full certificate pipeline for one (norm, q).
///
/// H = N^q is expanded on `grid` up to degree grid.resolution()/2 (rounded down
/// to even); the density keeps degrees <= M. The sufficient bound
/// lemma2_lhs < c(q) is tried first, then the direct test
/// min b_H > truncation_bound + quadrature_margin, then refutation
/// min b_H < -(truncation_bound + quadrature_margin).
EmbeddingCertificate certify_lemma2(const NormSpec& norm, double q, int r, const SphereGrid& grid, int M,
                                    const CertifyOptions& options = {});

/// Density of N^q (same expansion rules as certify_lemma2).
DensityResult density_for(const NormSpec& norm, double q, int r, const SphereGrid& grid, int M);

/// Minimum of a band-limited density over the grid, polished by local search.
double min_density(const HarmonicCoefficients& b, const SphereGrid& grid);

struct ConvexityResult {
  bool pass = false;
  double worst_margin = 0.0;  // max of Ñ(u+v) - Ñ(u) - Ñ(v) over the trials
  double min_value = 0.0;     // min of N over sampled directions
  int trials = 0;
  std::uint64_t seed = 0;
};

/// Monte-Carlo triangle inequality on the 1-homogeneous extension, with pairs
/// drawn both uniformly and at small angular separation. Slack 1e-12.
ConvexityResult convexity_check(const NormSpec& norm, int trials, std::uint64_t seed);

/// max over random unit x of |N(x)^q - ∫ |<x,ξ>|^q b(ξ) dξ|, integrated with a
/// pole-aligned kernel rule exact for the band-limited density.
double levy_verify(const NormSpec& norm, const HarmonicCoefficients& density, double q, int points,
                   std::uint64_t seed);

/// Residual of 1 + λ Σ x_i^{2k} = c(2k)∫|<x,ξ>|^{2k}dξ + λ Σ |x_i|^{2k} at random unit x.
double even_integer_example(int n, int k, double lambda, int points, std::uint64_t seed);

/// Relative weighted least-squares residual of fitting N(x)^2 by x^T A x on the grid.
double hilbertian_check(const NormSpec& norm, const SphereGrid& grid);

struct SearchOptions {
  double lambda_hi = 1.0;
  double lambda_min = 1e-8;
  double rel_tol = 1e-4;
  int convexity_trials = 100000;
  bool refine_q = false;
  CertifyOptions certify;
};

struct SearchResult {
  bool feasible = false;
  bool hilbertian = false;  // f ≡ 0: every λ gives the euclidean norm
  double lambda_star = 0.0;
  std::vector<EmbeddingCertificate> certificates;
  ConvexityResult convexity;
  std::vector<double> q_samples;  // after optional refinement
  int evaluations = 0;
};

/// Largest λ in (0, lambda_hi] (bisection, relative tolerance rel_tol) for which
/// N = 1 + λ f passes convexity_check and is certified for every q in Q.
SearchResult search_lambda(const HarmonicCoefficients& f, const QSet& Q, int r, const SphereGrid& grid, int M,
                           const SearchOptions& options = {});

/// Inserts midpoints between adjacent samples whose certificate margins differ
/// by more than 10%, skipping midpoints inside the guard band.
QSet refine_qset(const QSet& Q, const std::vector<EmbeddingCertificate>& certificates);

/// Uniform random unit vectors (seeded).
std::vector<std::vector<double>> random_unit_points(int n, int count, std::uint64_t seed);

}  // namespace lqembed
