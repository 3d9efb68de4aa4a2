#pragma once

// Quadrature on the unit sphere S^{n-1} and on [-1, 1].

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace lqembed {

/// Surface area ω_n = 2π^{n/2}/Γ(n/2) of S^{n-1} ⊂ R^n.
double surface_area(int n);

/// Gauss rule on [-1, 1] for the Jacobi weight (1-u)^a (1+u)^b, a, b > -1.
/// Nodes and weights are carried in extended precision: oracle integrals of
/// highly oscillatory polynomials cancel down to ~1e-9 of their term sizes.
struct GaussRule {
  std::vector<long double> nodes;
  std::vector<long double> weights;
};

/// Golub–Welsch start, then Newton refinement on P_count^{(a,b)} in long double
/// with weights from the Christoffel formula. Exact for degree 2*count-1.
/// When a == b the rule is symmetrized exactly about 0.
GaussRule gauss_jacobi(int count, double a, double b);

/// Symmetric rule on [-1, 1] for the weight |t|^kink (1-t^2)^{(n-3)/2}.
///
/// With kink == 0 this is the Gauss–Gegenbauer rule (Gauss–Legendre for n = 3).
/// Each half-interval is mapped by s = t^2 onto a Gauss–Jacobi rule, so a
/// non-smooth factor |t|^q is absorbed into the weight and integrands of the
/// form |t|^q * polynomial are integrated exactly.
struct IntervalRule {
  std::vector<long double> nodes;
  std::vector<long double> weights;
  double weight_exponent = 0.0;  // (n-3)/2
  double kink_exponent = 0.0;
  int degree = 0;  // exact for polynomials up to this degree

  std::size_t size() const { return nodes.size(); }

  /// g is called with a long double node; accumulation is in long double.
  template <class F>
  long double integrate(F&& g) const {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * static_cast<long double>(g(nodes[i]));
    return acc;
  }
};

IntervalRule build_interval_rule(int n, int degree);
IntervalRule build_kink_rule(int n, double kink, int degree);

/// Quadrature nodes on S^{n-1} with surface-measure weights.
///
/// Invariants: unit nodes, positive weights summing to ω_n, and antipodal
/// symmetry (node i and node antipode(i) are exact negatives with equal weight).
class SphereGrid {
 public:
  SphereGrid(int n, int resolution, std::vector<double> coords, std::vector<double> weights);

  int dimension() const { return n_; }
  int resolution() const { return resolution_; }
  std::size_t size() const { return weights_.size(); }
  std::span<const double> node(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
  }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& coords() const { return coords_; }

  template <class F>
  double integrate(F&& g) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < size(); ++i) acc += weights_[i] * g(node(i));
    return acc;
  }

 private:
  int n_;
  int resolution_;
  std::vector<double> coords_;
  std::vector<double> weights_;
};

/// n = 2: composite Gauss–Legendre on the four quadrant arcs.
/// n = 3: Gauss–Legendre in the polar cosine times equispaced azimuth; exact for
/// polynomials of degree <= resolution restricted to the sphere.
/// Throws UnsupportedDimension for other n and DomainError for resolution < 4.
SphereGrid build_grid(int n, int resolution);

/// Pole-aligned rule for x ↦ ∫ |<x,ξ>|^q g(ξ) dξ at a fixed unit x (n in {2,3}).
/// Weights include the |<x,ξ>|^q factor; exact when g is a polynomial of degree
/// <= resolution. Nodes are unit vectors; weights are positive.
SphereGrid build_kernel_rule(std::span<const double> pole, double q, int resolution);

/// CSV with header x1..xn,w and 17 significant digits per value.
void write_grid_csv(const SphereGrid& grid, const std::filesystem::path& path);
SphereGrid read_grid_csv(const std::filesystem::path& path, int resolution);

/// Looks for grid_n{n}_r{resolution}.csv in cache_dir; builds and stores it if absent.
SphereGrid cached_grid(int n, int resolution, const std::optional<std::filesystem::path>& cache_dir);

}  // namespace lqembed
