#pragma once

// Norms on R^n described by their restriction N to the unit sphere.

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lqembed/harmonics.hpp"

namespace lqembed {

struct Euclidean {};

/// N(x) = 1 + λ f(x) with f an even band-limited function.
struct Perturbation {
  HarmonicCoefficients f;
  double lambda = 0.0;
};

/// N(x) = (1 + λ Σ x_i^{2k})^{1/(2k)}.
struct LqPower {
  int k = 2;
  double lambda = 0.0;
};

/// N(x) = ‖x‖_p.
struct LpBall {
  double p = 2.0;
};

/// N(x) = sqrt(x^T A x), A symmetric positive definite (row-major n*n).
struct QuadraticForm {
  std::vector<double> matrix;
};

class NormSpec {
 public:
  using Kind = std::variant<Euclidean, Perturbation, LqPower, LpBall, QuadraticForm>;

  NormSpec(int n, Kind kind);

  static NormSpec euclidean(int n) { return {n, Euclidean{}}; }
  static NormSpec perturbation(HarmonicCoefficients f, double lambda);
  static NormSpec lq_power(int n, int k, double lambda) { return {n, LqPower{k, lambda}}; }
  static NormSpec lp_ball(int n, double p) { return {n, LpBall{p}}; }
  static NormSpec quadratic(int n, std::vector<double> matrix) { return {n, QuadraticForm{std::move(matrix)}}; }

  int dimension() const { return n_; }
  const Kind& kind() const { return kind_; }

  /// N(x) for a unit vector x.
  double on_sphere(std::span<const double> x) const;

  /// 1-homogeneous extension |x|_2 N(x/|x|_2); 0 at the origin.
  double extended(std::span<const double> x) const;

  /// Same norm with the perturbation/power parameter replaced (no-op for other kinds).
  NormSpec with_lambda(double lambda) const;

  /// Short label: "euclidean", "perturbation", "lq-power:2", "lp-ball:4", "quadratic".
  std::string label() const;

 private:
  int n_;
  Kind kind_;
};

/// Unit coefficient on the zonal degree-4 harmonic (j = 1 for n = 3, cos 4θ for n = 2).
HarmonicCoefficients zonal_y4(int n);

}  // namespace lqembed
