#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "doctest.h"
#include "lqembed/certify.hpp"
#include "lqembed/errors.hpp"
#include "lqembed/harmonics.hpp"
#include "lqembed/specfun.hpp"
#include "lqembed/sphere.hpp"

using namespace lqembed;
constexpr double kPi = std::numbers::pi;

namespace {

HarmonicCoefficients random_coefficients(int n, int M, bool even_only, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  HarmonicCoefficients c(n, M);
  for (int m = 0; m <= M; ++m) {
    if (even_only && m % 2) continue;
    for (int j = 1; j <= dim_harmonics(n, m); ++j) c.set(m, j, u(rng));
  }
  c.set_even(even_only);
  return c;
}

}  // namespace

TEST_CASE("dim_harmonics") {
  CHECK(dim_harmonics(3, 0) == 1);
  CHECK(dim_harmonics(3, 2) == 5);
  CHECK(dim_harmonics(4, 2) == 9);
  for (int m = 1; m < 30; ++m) {
    CHECK(dim_harmonics(2, m) == 2);
    CHECK(dim_harmonics(3, m) == 2 * m + 1);
    CHECK(dim_harmonics(4, m) == (m + 1) * (m + 1));
  }
  CHECK(basis_size(3, 4) == 25);
  CHECK(basis_size(2, 4) == 9);
}

TEST_CASE("basis values") {
  const std::vector<double> x{0.36, 0.48, 0.8};
  CHECK(basis_eval(3, 0, 1, x) == doctest::Approx(1 / std::sqrt(4 * kPi)).epsilon(1e-15));
  const std::vector<double> e1{1.0, 0.0};
  CHECK(basis_eval(2, 1, 1, e1) == doctest::Approx(1 / std::sqrt(kPi)).epsilon(1e-15));
  const std::vector<double> pole{0.0, 0.0, 1.0};
  CHECK(basis_eval(3, 1, 1, pole) == doctest::Approx(std::sqrt(3 / (4 * kPi))).epsilon(1e-14));
  CHECK(std::abs(basis_eval(3, 1, 2, pole)) <= 1e-15);
  CHECK(std::abs(basis_eval(3, 1, 3, pole)) <= 1e-15);
  // zonal harmonic of degree m is sqrt((2m+1)/(4π)) P_m(z)
  for (int m = 0; m <= 30; ++m)
    CHECK(basis_eval(3, m, 1, x) == doctest::Approx(std::sqrt((2 * m + 1) / (4 * kPi)) * specfun::legendre_eval(m, 0.8)).epsilon(1e-12));
  CHECK_THROWS_AS(basis_eval(4, 1, 1, std::vector<double>{1, 0, 0, 0}), UnsupportedDimension);
}

TEST_CASE("orthonormality on a grid") {
  for (int n : {2, 3}) {
    const int M = 12;
    const auto g = build_grid(n, 2 * M);
    const std::size_t size = basis_size(n, M);
    std::vector<double> gram(size * size, 0.0), y(size);
    for (std::size_t i = 0; i < g.size(); ++i) {
      basis_all(M, g.node(i), y);
      for (std::size_t a = 0; a < size; ++a)
        for (std::size_t b = 0; b < size; ++b) gram[a * size + b] += g.weight(i) * y[a] * y[b];
    }
    double worst = 0.0;
    for (std::size_t a = 0; a < size; ++a)
      for (std::size_t b = 0; b < size; ++b) worst = std::max(worst, std::abs(gram[a * size + b] - (a == b ? 1.0 : 0.0)));
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("addition theorem") {
  CHECK(addition_theorem_sum(3, 2, std::vector<double>{0.6, 0.0, 0.8}) == doctest::Approx(5 / (4 * kPi)).epsilon(1e-13));
  CHECK(addition_theorem_sum(3, 0, std::vector<double>{0.0, 1.0, 0.0}) == doctest::Approx(1 / (4 * kPi)).epsilon(1e-13));
  CHECK(addition_theorem_sum(2, 3, std::vector<double>{0.28, 0.96}) == doctest::Approx(1 / kPi).epsilon(1e-13));
  for (int n : {2, 3}) {
    const auto pts = random_unit_points(n, 100, 11);
    double worst = 0.0;
    for (const auto& x : pts)
      for (int m = 0; m <= 10; ++m)
        worst = std::max(worst, std::abs(addition_theorem_sum(n, m, x) - dim_harmonics(n, m) / surface_area(n)));
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("expand examples") {
  const auto g = build_grid(3, 24);
  SUBCASE("constant") {
    const auto c = expand_function(g, [](auto) { return 1.0; }, 8);
    CHECK(c.at(0, 1) == doctest::Approx(std::sqrt(4 * kPi)).epsilon(1e-12));
    for (std::size_t k = 1; k < c.values().size(); ++k) CHECK(std::abs(c.values()[k]) <= 1e-10);
    CHECK(c.even());
    CHECK(c.projected());
    CHECK(l2_norm(c) == doctest::Approx(std::sqrt(4 * kPi)).epsilon(1e-12));
    CHECK(evaluate(c, std::vector<double>{0.0, 0.6, 0.8}) == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("single harmonic") {
    const auto c = expand_function(g, [](auto x) { return basis_eval(3, 4, 2, x); }, 8);
    for (int m = 0; m <= 8; ++m)
      for (int j = 1; j <= dim_harmonics(3, m); ++j) CHECK(std::abs(c.at(m, j) - ((m == 4 && j == 2) ? 1.0 : 0.0)) <= 1e-10);
  }
  SUBCASE("x3 squared") {
    const auto c = expand_function(g, [](auto x) { return x[2] * x[2]; }, 8);
    for (int m = 0; m <= 8; ++m)
      for (int j = 1; j <= dim_harmonics(3, m); ++j)
        if (!(m == 0 || (m == 2 && j == 1))) CHECK(std::abs(c.at(m, j)) <= 1e-10);
    // x_3² = 1/3 + (2/3) P_2(x_3)
    CHECK(c.at(0, 1) == doctest::Approx(std::sqrt(4 * kPi) / 3).epsilon(1e-12));
    CHECK(c.at(2, 1) == doctest::Approx(2.0 / 3.0 * std::sqrt(4 * kPi / 5)).epsilon(1e-12));
    CHECK(l2_norm(c) == doctest::Approx(std::sqrt(4 * kPi / 5)).epsilon(1e-9));
    for (const auto& x : random_unit_points(3, 20, 3)) CHECK(std::abs(evaluate(c, x) - x[2] * x[2]) <= 1e-10);
  }
  SUBCASE("grid too coarse") { CHECK_THROWS_AS(expand_function(g, [](auto) { return 1.0; }, 13), ResolutionError); }
}

TEST_CASE("evaluate single entry") {
  HarmonicCoefficients c(3, 2);
  c.set(2, 3, 1.0);
  const std::vector<double> x{0.36, 0.48, 0.8};
  CHECK(evaluate(c, x) == doctest::Approx(basis_eval(3, 2, 3, x)).epsilon(1e-15));
  HarmonicCoefficients unit(2, 5);
  unit.set(5, 2, 1.0);
  CHECK(l2_norm(unit) == 1.0);
}

TEST_CASE("even functions expand without odd degrees") {
  const auto g = build_grid(3, 32);
  const auto c = expand_function(g, [](auto x) { return std::exp(x[0] * x[1]) + std::pow(x[2], 4); }, 16);
  CHECK(c.even());
  for (int m = 1; m <= 16; m += 2) CHECK(c.degree_norm(m) <= 1e-10);
  const auto odd = expand_function(g, [](auto x) { return x[0] + x[1] * x[2]; }, 16);
  CHECK_FALSE(odd.even());
}

TEST_CASE("parseval") {
  for (int n : {2, 3}) {
    const auto c = random_coefficients(n, 10, false, 5);
    const auto g = build_grid(n, 24);
    const double quad = g.integrate([&](auto x) { const double v = evaluate(c, x); return v * v; });
    const double l2 = l2_norm(c);
    CHECK(std::abs(quad - l2 * l2) <= 1e-8 * l2 * l2);
  }
}

TEST_CASE("laplace-beltrami") {
  HarmonicCoefficients c(3, 4);
  c.set(0, 1, 1.0);
  c.set(1, 2, 1.0);
  c.set(2, 1, 1.0);
  const auto d1 = laplace_beltrami_apply(c, 1);
  CHECK(d1.at(0, 1) == 0.0);
  CHECK(d1.at(1, 2) == -2.0);
  CHECK(d1.at(2, 1) == -6.0);
  const auto d2 = laplace_beltrami_apply(c, 2);
  CHECK(d2.at(2, 1) == 36.0);
  CHECK(laplace_beltrami_apply(c, 0).at(0, 1) == 1.0);
}

TEST_CASE("laplace-beltrami is self-adjoint") {
  for (int n : {2, 3}) {
    const auto G = random_coefficients(n, 9, false, 21);
    const auto H = random_coefficients(n, 9, false, 22);
    for (int r : {1, 2, 3}) {
      const auto dG = laplace_beltrami_apply(G, r);
      const auto dH = laplace_beltrami_apply(H, r);
      double a = 0.0, b = 0.0;
      for (std::size_t k = 0; k < G.values().size(); ++k) {
        a += dG.values()[k] * H.values()[k];
        b += G.values()[k] * dH.values()[k];
      }
      CHECK(std::abs(a - b) <= 1e-8 * std::abs(a));
    }
  }
}

TEST_CASE("laplace-beltrami matches a finite-difference Laplacian on S^2") {
  const auto c = random_coefficients(3, 5, false, 9);
  const auto lap = laplace_beltrami_apply(c, 1);
  // spherical Laplacian of the degree-0 homogeneous extension: Δ_S f = Δ F for F(x) = f(x/|x|) on |x| = 1
  const double h = 1e-3;
  for (const auto& x : random_unit_points(3, 5, 4)) {
    auto F = [&](std::vector<double> y) {
      const double r = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
      for (double& v : y) v /= r;
      return evaluate(c, y);
    };
    double acc = 0.0;
    for (int k = 0; k < 3; ++k) {
      auto p = x, m = x;
      p[k] += h;
      m[k] -= h;
      acc += (F(p) - 2 * F(x) + F(m)) / (h * h);
    }
    CHECK(acc == doctest::Approx(evaluate(lap, x)).epsilon(1e-4));
  }
}

TEST_CASE("coefficient CSV round trip") {
  auto c = random_coefficients(3, 6, true, 13);
  const auto path = std::filesystem::temp_directory_path() / "lqembed_coeffs_test.csv";
  write_coefficients_csv(c, path);
  const auto back = read_coefficients_csv(path);
  CHECK(back.dimension() == 3);
  CHECK(back.max_degree() == 6);
  CHECK(back.even());
  for (std::size_t k = 0; k < c.values().size(); ++k) CHECK(back.values()[k] == c.values()[k]);
  std::filesystem::remove(path);
}

TEST_CASE("resized keeps low degrees") {
  const auto c = random_coefficients(2, 6, true, 17);
  const auto small = c.resized(4);
  const auto big = c.resized(10);
  CHECK(small.at(4, 2) == c.at(4, 2));
  CHECK(big.at(6, 1) == c.at(6, 1));
  CHECK(big.at(10, 1) == 0.0);
}
