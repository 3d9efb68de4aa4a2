#pragma once

#include <stdexcept>
#include <string>

namespace lqembed {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Result not representable in double precision.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

// Full sphere grids and harmonic bases exist for n in {2, 3} only.
class UnsupportedDimension : public std::invalid_argument {
 public:
  explicit UnsupportedDimension(int n)
      : std::invalid_argument("unsupported dimension n=" + std::to_string(n) +
                              " (full grids and bases are available for n in {2,3})"),
        n_(n) {}
  int dimension() const noexcept { return n_; }

 private:
  int n_;
};

// q within the guard band of a positive even integer.
class ExcludedExponent : public std::domain_error {
 public:
  explicit ExcludedExponent(double q)
      : std::domain_error("exponent q=" + std::to_string(q) +
                          " is (too close to) an even integer; the |t|^q eigenvalues degenerate there"),
        q_(q) {}
  double q() const noexcept { return q_; }

 private:
  double q_;
};

// Smoothness / evenness requirements of the inversion series are not met.
class HypothesisViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Quadrature grid too coarse for the requested expansion degree.
class ResolutionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A refinement loop stopped before reaching its tolerance.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double estimate)
      : std::runtime_error(what), estimate_(estimate) {}
  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

// Eigenvalue too small to invert reliably.
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lqembed
