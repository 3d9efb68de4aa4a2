#include <cmath>
#include <filesystem>
#include <numbers>

#include "doctest.h"
#include "lqembed/errors.hpp"
#include "lqembed/funk_hecke.hpp"
#include "lqembed/harmonics.hpp"
#include "lqembed/specfun.hpp"
#include "lqembed/sphere.hpp"

using namespace lqembed;
constexpr double kPi = std::numbers::pi;

namespace {

// ∫_{S²} x^a y^b z^c: zero unless all even, else 2Γ(α)Γ(β)Γ(γ)/Γ(α+β+γ) with α=(a+1)/2 etc.
double sphere_moment(int a, int b, int c) {
  if (a % 2 || b % 2 || c % 2) return 0.0;
  const double al = (a + 1) / 2.0, be = (b + 1) / 2.0, ga = (c + 1) / 2.0;
  return 2.0 * std::exp(std::lgamma(al) + std::lgamma(be) + std::lgamma(ga) - std::lgamma(al + be + ga));
}

}  // namespace

TEST_CASE("surface_area") {
  CHECK(surface_area(2) == doctest::Approx(2 * kPi).epsilon(1e-15));
  CHECK(surface_area(3) == doctest::Approx(4 * kPi).epsilon(1e-15));
  CHECK(surface_area(4) == doctest::Approx(2 * kPi * kPi).epsilon(1e-15));
  CHECK_THROWS_AS(surface_area(1), DomainError);
}

TEST_CASE("grid invariants") {
  for (int n : {2, 3}) {
    for (int res : {4, 16, 33, 64}) {
      const auto g = build_grid(n, res);
      double sum = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const auto x = g.node(i);
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        CHECK(std::abs(r2 - 1.0) <= 1e-14);
        CHECK(g.weight(i) > 0.0);
        sum += g.weight(i);
      }
      CHECK(std::abs(sum - surface_area(n)) <= 1e-10);
      // antipodal symmetry: the grid is closed under x -> -x with equal weights
      double odd = g.integrate([](auto x) { return x[0] + 2 * x[1] + x[0] * x[0] * x[1]; });
      CHECK(std::abs(odd) <= 1e-13);
    }
  }
  CHECK_THROWS_AS(build_grid(4, 16), UnsupportedDimension);
  CHECK_THROWS_AS(build_grid(3, 2), DomainError);
}

TEST_CASE("grid examples") {
  const auto g3 = build_grid(3, 16);
  CHECK(std::abs(g3.integrate([](auto) { return 1.0; }) - 4 * kPi) <= 1e-10);
  CHECK(std::abs(g3.integrate([](auto x) { return x[0] * x[0]; }) - 4 * kPi / 3) <= 1e-10);
  const auto g2 = build_grid(2, 64);
  CHECK(std::abs(g2.integrate([](auto x) { return std::abs(x[0]); }) - 4.0) <= 1e-10);
}

TEST_CASE("n=3 grid integrates monomials up to its resolution") {
  for (int res : {8, 12, 20}) {
    const auto g = build_grid(3, res);
    for (int a = 0; a <= res; ++a)
      for (int b = 0; a + b <= res; ++b)
        for (int c = 0; a + b + c <= res; ++c) {
          const double got = g.integrate([&](auto x) { return std::pow(x[0], a) * std::pow(x[1], b) * std::pow(x[2], c); });
          const double want = sphere_moment(a, b, c);
          CHECK(std::abs(got - want) <= 1e-10 * std::max(1.0, std::abs(want)));
        }
  }
}

TEST_CASE("harmonics of positive degree integrate to zero") {
  for (int n : {2, 3}) {
    const int res = 24;
    const auto g = build_grid(n, res);
    std::vector<double> values(basis_size(n, res));
    std::vector<double> acc(values.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      basis_all(res, g.node(i), values);
      for (std::size_t k = 0; k < values.size(); ++k) acc[k] += g.weight(i) * values[k];
    }
    for (std::size_t k = 1; k < acc.size(); ++k) CHECK(std::abs(acc[k]) <= 1e-9);
  }
}

TEST_CASE("kernel integrals converge under resolution doubling") {
  // ∫|<x,ξ>|^q dξ = 1/c(q); the kink at <x,ξ> = 0 is split off by the pole-aligned rule
  for (int n : {2, 3}) {
    for (double q : {0.5, 1.0, 2.5, 3.7, 5.9}) {
      const double exact = 2.0 * std::pow(kPi, 0.5 * (n - 1)) * std::exp(std::lgamma(0.5 * (q + 1)) - std::lgamma(0.5 * (n + q)));
      for (const auto& x : std::vector<std::vector<double>>{{1, 0, 0}, {0.48, -0.6, 0.64}, {0, 0, 1}}) {
        const std::vector<double> pole = n == 2 ? std::vector<double>{0.6, -0.8} : x;
        const double a = build_kernel_rule(pole, q, 16).integrate([](auto) { return 1.0; });
        const double b = build_kernel_rule(pole, q, 32).integrate([](auto) { return 1.0; });
        CHECK(std::abs(a - b) <= 1e-8 * std::abs(b));
        CHECK(std::abs(b - exact) <= 1e-12 * exact);
      }
    }
  }
  // the product grid needs no splitting when the kink is smooth on its arcs
  const auto g = build_grid(2, 64);
  const auto fine = build_grid(2, 128);
  for (double q : {1.0, 3.0, 5.0}) {
    auto k = [&](const SphereGrid& s) { return s.integrate([&](auto x) { return std::pow(std::abs(x[0]), q); }); };
    CHECK(std::abs(k(g) - k(fine)) <= 1e-8 * k(fine));
  }
}

TEST_CASE("interval rules") {
  SUBCASE("polynomial exactness against the Gegenbauer weight") {
    for (int n : {2, 3, 4, 5, 7}) {
      const auto rule = build_interval_rule(n, 10);
      CHECK(rule.degree >= 10);
      const double a = (n - 3) / 2.0;
      for (int k = 0; k <= 10; k += 2) {
        // ∫ t^k (1-t²)^a dt = B((k+1)/2, a+1)
        const double want = specfun::beta((k + 1) / 2.0, a + 1.0);
        const double got = static_cast<double>(rule.integrate([&](long double t) { return std::pow(t, k); }));
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
        const double odd = static_cast<double>(rule.integrate([&](long double t) { return std::pow(t, k + 1); }));
        CHECK(std::abs(odd) <= 1e-14);
      }
    }
  }
  SUBCASE("examples") {
    const auto r3 = build_interval_rule(3, 10);
    CHECK(static_cast<double>(r3.integrate([](long double t) { return t * t; })) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    // |t| is not polynomial: refine until two successive degrees agree
    int degree = 200;
    double prev = static_cast<double>(build_interval_rule(3, degree).integrate([](long double t) { return std::abs(t); }));
    double cur = prev;
    for (degree *= 2; degree <= 12800; degree *= 2) {
      cur = static_cast<double>(build_interval_rule(3, degree).integrate([](long double t) { return std::abs(t); }));
      if (std::abs(cur - prev) <= 1e-7) break;
      prev = cur;
    }
    CHECK(std::abs(cur - 1.0) <= 1e-6);
    // with the kink absorbed into the weight the same integral is exact
    CHECK(static_cast<double>(build_kink_rule(3, 1.0, 2).integrate([](long double) { return 1.0L; })) == doctest::Approx(1.0).epsilon(1e-15));
    const auto r5 = build_interval_rule(5, 10);
    CHECK(static_cast<double>(r5.integrate([](long double) { return 1.0L; })) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("kink rules absorb |t|^q exactly") {
    for (double q : {0.5, 1.0, 3.3}) {
      const auto rule = build_kink_rule(3, q, 12);
      CHECK(rule.kink_exponent == q);
      for (int k = 0; k <= 12; k += 2) {
        const double want = 2.0 / (k + q + 1.0);
        const double got = static_cast<double>(rule.integrate([&](long double t) { return std::pow(t, k); }));
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("gauss_jacobi rule") {
  const auto rule = gauss_jacobi(12, 0.5, -0.3);
  long double sum = 0.0L;
  for (auto w : rule.weights) sum += w;
  // ∫ (1-u)^a (1+u)^b du = 2^{a+b+1} B(a+1, b+1)
  CHECK(static_cast<double>(sum) == doctest::Approx(std::pow(2.0, 1.2) * specfun::beta(1.5, 0.7)).epsilon(1e-13));
  const auto sym = gauss_jacobi(9, 1.0, 1.0);
  for (std::size_t i = 0; i < sym.nodes.size(); ++i) CHECK(sym.nodes[i] == -sym.nodes[sym.nodes.size() - 1 - i]);
}

TEST_CASE("kernel rule integrates |<x,ξ>|^q times polynomials") {
  // reference: expand g in harmonics and apply the closed-form eigenvalues
  const std::vector<double> pole{0.48, -0.6, 0.64};
  auto g = [](std::span<const double> x) { return 1.0 + x[0] * x[0] * x[1] * x[1] - 0.3 * x[2] * x[2] * x[2] * x[2] + x[0] * x[1] * x[2]; };
  const auto c = expand_function(build_grid(3, 16), g, 6);
  for (double q : {0.5, 1.0, 3.0}) {
    const double got = build_kernel_rule(pole, q, 12).integrate(g);
    double want = 0.0;
    for (int m = 0; m <= 6; ++m)
      for (int j = 1; j <= dim_harmonics(3, m); ++j) want += lambda_closed(3, m, q) * c.at(m, j) * basis_eval(3, m, j, pole);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
  const std::vector<double> pole2{0.6, 0.8};
  const auto rule2 = build_kernel_rule(pole2, 1.0, 8);
  CHECK(rule2.integrate([](auto) { return 1.0; }) == doctest::Approx(4.0).epsilon(1e-13));
  for (std::size_t i = 0; i < rule2.size(); ++i) CHECK(rule2.weight(i) > 0.0);
}

TEST_CASE("grid CSV round trip and cache") {
  const auto dir = std::filesystem::temp_directory_path() / "lqembed_grid_test";
  std::filesystem::remove_all(dir);
  const auto g = build_grid(3, 10);
  const auto first = cached_grid(3, 10, dir);
  CHECK(std::filesystem::exists(dir / "grid_n3_r10.csv"));
  const auto second = cached_grid(3, 10, dir);
  REQUIRE(second.size() == g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(second.weight(i) == g.weight(i));
    for (int k = 0; k < 3; ++k) CHECK(second.node(i)[k] == g.node(i)[k]);
  }
  CHECK(first.size() == g.size());
  std::filesystem::remove_all(dir);
}
