#pragma once

// Real orthonormal spherical harmonics on S^1 and S^2, expansion/synthesis,
// the addition theorem and spectral Laplace–Beltrami powers.
//
// Order index convention (1-based j):
//   n = 2:  j = 1 -> cos(mθ)/√π,  j = 2 -> sin(mθ)/√π   (m >= 1);  Y_0 = 1/√(2π)
//   n = 3:  j = 1 -> zonal (order 0), j = 2k -> cos(kφ) part, j = 2k+1 -> sin(kφ) part

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "lqembed/sphere.hpp"

namespace lqembed {

/// N(n, m): dimension of the space of degree-m spherical harmonics on S^{n-1}.
std::int64_t dim_harmonics(int n, int m);

/// Number of harmonics of degree <= max_degree (n in {2,3}).
std::size_t basis_size(int n, int max_degree);

/// Flat position of (m, j) in basis order.
std::size_t basis_index(int n, int m, int j);

/// All Y_{mj}(x) for m <= max_degree, in basis order. x must be a unit vector.
void basis_all(int max_degree, std::span<const double> x, std::span<double> out);

double basis_eval(int n, int m, int j, std::span<const double> x);

class HarmonicCoefficients {
 public:
  HarmonicCoefficients(int n, int max_degree);

  int dimension() const { return n_; }
  int max_degree() const { return max_degree_; }

  double at(int m, int j) const { return values_[basis_index(n_, m, j)]; }
  void set(int m, int j, double v) { values_[basis_index(n_, m, j)] = v; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// True when all odd-degree entries are exactly zero.
  bool even() const { return even_; }
  void set_even(bool e) { even_ = e; }

  /// True when the coefficients came from projecting sampled data (the
  /// represented function may carry energy beyond max_degree).
  bool projected() const { return projected_; }
  void set_projected(bool p) { projected_ = p; }

  /// ‖P_m F‖, the L2 norm of the degree-m component.
  double degree_norm(int m) const;

  /// Recomputes the even flag from the stored entries (exact zero test).
  void refresh_even();

  /// Copy restricted (or zero-extended) to a new maximum degree.
  HarmonicCoefficients resized(int max_degree) const;

 private:
  int n_;
  int max_degree_;
  bool even_ = false;
  bool projected_ = false;
  std::vector<double> values_;
};

/// Quadrature projection of sampled values (one per grid node) onto degrees <= max_degree.
/// Requires grid.resolution() >= 2 * max_degree (ResolutionError otherwise).
HarmonicCoefficients expand(const SphereGrid& grid, std::span<const double> samples, int max_degree);

template <class F>
HarmonicCoefficients expand_function(const SphereGrid& grid, F&& f, int max_degree) {
  std::vector<double> samples(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) samples[i] = f(grid.node(i));
  return expand(grid, samples, max_degree);
}

double evaluate(const HarmonicCoefficients& c, std::span<const double> x);

/// Σ_j Y_{mj}(x)^2; equals N(n,m)/ω_n.
double addition_theorem_sum(int n, int m, std::span<const double> x);

/// Δ^r applied spectrally: entry (m, j) scaled by (-m(m+n-2))^r.
HarmonicCoefficients laplace_beltrami_apply(const HarmonicCoefficients& c, int r);

double l2_norm(const HarmonicCoefficients& c);

/// CSV dump: "# n=<n>,max_degree=<M>,even=<0|1>" then "m,j,value" rows.
void write_coefficients_csv(const HarmonicCoefficients& c, const std::filesystem::path& path);
HarmonicCoefficients read_coefficients_csv(const std::filesystem::path& path);

}  // namespace lqembed
