#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "lqembed/certify.hpp"
#include "lqembed/errors.hpp"
#include "lqembed/funk_hecke.hpp"
#include "lqembed/harmonics.hpp"
#include "lqembed/inversion.hpp"
#include "lqembed/sphere.hpp"

using namespace lqembed;
constexpr double kPi = std::numbers::pi;

namespace {

HarmonicCoefficients random_even(int n, int M, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  HarmonicCoefficients c(n, M);
  for (int m = 0; m <= M; m += 2)
    for (int j = 1; j <= dim_harmonics(n, m); ++j) c.set(m, j, u(rng));
  c.set_even(true);
  return c;
}

HarmonicCoefficients constant_one(int n, int M) {
  HarmonicCoefficients c(n, M);
  c.set(0, 1, std::sqrt(surface_area(n)));
  c.set_even(true);
  return c;
}

}  // namespace

TEST_CASE("constant function inverts to c(q)") {
  for (int n : {2, 3})
    for (double q : {0.5, 1.0, 3.0, 5.3}) {
      const int r = auto_smoothness(n, q);
      const auto d = invert(constant_one(n, 8), q, r, 8);
      CHECK(d.coefficients.at(0, 1) == doctest::Approx(c_constant(n, q) * std::sqrt(surface_area(n))).epsilon(1e-12));
      CHECK(l2_norm(d.coefficients) == doctest::Approx(std::abs(d.coefficients.at(0, 1))).epsilon(1e-15));
      CHECK(d.truncation_bound == 0.0);
      CHECK(uniform_bound(constant_one(n, 8), q, r) == doctest::Approx(c_constant(n, q)).epsilon(1e-12));
    }
}

TEST_CASE("single perturbation term") {
  auto H = constant_one(3, 4);
  const double eps = 0.01;
  H.set(2, 3, eps);
  const auto d = invert(H, 1.0, 3, 4);
  CHECK(d.coefficients.at(2, 3) == doctest::Approx(eps * 2 / kPi).epsilon(1e-13));
  CHECK(d.coefficients.at(0, 1) == doctest::Approx(std::sqrt(4 * kPi) / (2 * kPi)).epsilon(1e-13));
}

TEST_CASE("preconditions") {
  HarmonicCoefficients odd(3, 4);
  odd.set(3, 1, 1.0);
  CHECK_THROWS_AS(invert(odd, 1.0, 3, 4), HypothesisViolation);
  CHECK_THROWS_AS(invert(constant_one(3, 4), 1.0, 2, 4), HypothesisViolation);
  CHECK_THROWS_AS(invert(constant_one(3, 4), 2.0, 3, 4), ExcludedExponent);
  CHECK_THROWS_AS(invert(constant_one(3, 4), 1.0, 3, 3), DomainError);
  CHECK_THROWS_AS(forward(odd, 1.0), HypothesisViolation);
}

TEST_CASE("forward of c(q) is the constant one") {
  HarmonicCoefficients b(3, 4);
  b.set(0, 1, c_constant(3, 1.5) * std::sqrt(4 * kPi));
  b.set_even(true);
  const auto H = forward(b, 1.5);
  CHECK(H.at(0, 1) == doctest::Approx(std::sqrt(4 * kPi)).epsilon(1e-13));
}

TEST_CASE("round trips") {
  for (int n : {2, 3})
    for (double q : {0.5, 1.0, 3.0}) {
      const auto H = random_even(n, 8, 100 + static_cast<unsigned>(q * 10));
      const int r = auto_smoothness(n, q);
      const auto b = invert(H, q, r, 8).coefficients;
      const auto back = forward(b, q);
      const auto again = invert(forward(H, q), q, r, 8).coefficients;
      for (std::size_t k = 0; k < H.values().size(); ++k) {
        CHECK(std::abs(back.values()[k] - H.values()[k]) <= 1e-10);
        CHECK(std::abs(again.values()[k] - H.values()[k]) <= 1e-10);
      }
    }
}

TEST_CASE("pointwise representation by quadrature") {
  for (double q : {0.5, 1.0, 3.0}) {
    const auto H = random_even(3, 8, 7);
    const auto b = invert(H, q, auto_smoothness(3, q), 8).coefficients;
    double worst = 0.0;
    for (const auto& x : random_unit_points(3, 50, 31)) {
      const auto rule = build_kernel_rule(x, q, 64);
      const double rep = rule.integrate([&](auto xi) { return evaluate(b, xi); });
      worst = std::max(worst, std::abs(evaluate(H, x) - rep));
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("uniform bound dominates the realized density") {
  const auto grid = build_grid(3, 64);
  for (unsigned seed = 1; seed <= 6; ++seed)
    for (double q : {0.5, 1.0, 3.0, 5.5}) {
      auto H = random_even(3, 8, seed);
      H.set(0, 1, 5.0 + seed);
      const int r = auto_smoothness(3, q);
      const auto d = invert(H, q, r, 8);
      double sup = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) sup = std::max(sup, std::abs(evaluate(d.coefficients, grid.node(i))));
      CHECK(sup <= d.uniform_bound);
      CHECK(d.uniform_bound == doctest::Approx(uniform_bound(H, q, r)));
    }
}

TEST_CASE("truncation bound shrinks with M") {
  const auto grid = build_grid(3, 64);
  auto H = expand_function(grid, [](auto x) { return std::pow(1.0 + 0.1 * x[0] * x[0] * x[1] * x[1], 1.5); }, 32);
  REQUIRE(H.even());
  double previous = 1e300;
  for (int M : {4, 8, 12, 16, 24, 32}) {
    const double t = invert(H, 1.0, 3, M).truncation_bound;
    CHECK(t <= previous);
    previous = t;
  }
  // band-limited exact input: no truncation
  auto exact = random_even(3, 6, 3);
  CHECK(invert(exact, 1.0, 3, 6).truncation_bound == 0.0);
  CHECK(invert(exact, 1.0, 3, 4).truncation_bound > 0.0);
}

TEST_CASE("residual tail estimate") {
  const auto grid = build_grid(3, 48);
  auto H = expand_function(grid, [](auto x) { return 1.0 / (1.2 - x[2] * x[2]); }, 24);
  const double tail = residual_tail_estimate(H, 1.0, 3);
  CHECK(tail > 0.0);
  // degree-26 component of the true function (zonal) is of the order of the estimate's first term
  auto exact = expand_function(build_grid(3, 120), [](auto x) { return 1.0 / (1.2 - x[2] * x[2]); }, 60);
  double true_tail = 0.0;
  for (int m = 26; m <= 60; m += 2)
    true_tail += std::exp(-lambda_closed_log(3, m, 1.0).log_abs) * std::sqrt((2 * m + 1) / (4 * kPi)) * exact.degree_norm(m);
  CHECK(tail >= 0.1 * true_tail);
  CHECK(tail <= 100 * true_tail);
  CHECK(residual_tail_estimate(constant_one(3, 8), 1.0, 3) == 0.0);
}

TEST_CASE("auto smoothness") {
  CHECK(auto_smoothness(3, 5.0) == 5);
  CHECK(auto_smoothness(3, 1.0) == 3);
  for (double q : {0.5, 1.0, 3.0, 5.7}) {
    const int r = auto_smoothness(3, q);
    CHECK(2 * r > 3 + q + 1);
    CHECK(2 * (r - 1) <= 3 + q + 1);
  }
}
