#include "lqembed/sphere.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "lqembed/errors.hpp"
#include "lqembed/specfun.hpp"

namespace lqembed {

namespace {

constexpr double kPi = std::numbers::pi;

void check_supported(int n) {
  if (n != 2 && n != 3) throw UnsupportedDimension(n);
}

// Orthonormal completion {e1, e2} of a unit vector in R^3.
void complete_basis(std::span<const double> x, double* e1, double* e2) {
  // Cross with the coordinate axis least aligned with x.
  int axis = 0;
  for (int k = 1; k < 3; ++k) {
    if (std::abs(x[k]) < std::abs(x[axis])) axis = k;
  }
  double a[3] = {0.0, 0.0, 0.0};
  a[axis] = 1.0;
  e1[0] = x[1] * a[2] - x[2] * a[1];
  e1[1] = x[2] * a[0] - x[0] * a[2];
  e1[2] = x[0] * a[1] - x[1] * a[0];
  const double norm = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
  for (int k = 0; k < 3; ++k) e1[k] /= norm;
  e2[0] = x[1] * e1[2] - x[2] * e1[1];
  e2[1] = x[2] * e1[0] - x[0] * e1[2];
  e2[2] = x[0] * e1[1] - x[1] * e1[0];
}

// P_N^{(a,b)}(x) by the three-term recurrence, in extended precision.
long double jacobi_p(int degree, double a_in, double b_in, long double x) {
  const long double a = a_in, b = b_in, ab = a + b;
  if (degree == 0) return 1.0L;
  long double prev = 1.0L;
  long double cur = (a + 1.0L) + 0.5L * (ab + 2.0L) * (x - 1.0L);
  for (int k = 2; k <= degree; ++k) {
    const long double s = 2.0L * k + ab;
    const long double c1 = 2.0L * k * (k + ab) * (s - 2.0L);
    const long double c2 = (s - 1.0L) * (s * (s - 2.0L) * x + a * a - b * b);
    const long double c3 = 2.0L * (k + a - 1.0L) * (k + b - 1.0L) * s;
    const long double next = (c2 * cur - c3 * prev) / c1;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

double surface_area(int n) {
  if (n < 2) throw DomainError("surface_area: dimension must be >= 2");
  return 2.0 * std::pow(kPi, 0.5 * n) / std::exp(specfun::gamma_ln(0.5 * n));
}

GaussRule gauss_jacobi(int count, double a, double b) {
  if (count < 1) throw DomainError("gauss_jacobi: need at least one node");
  if (!(a > -1.0) || !(b > -1.0)) throw DomainError("gauss_jacobi: exponents must exceed -1");

  const auto n = static_cast<Eigen::Index>(count);
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max<Eigen::Index>(n - 1, 0));
  const double ab = a + b;
  diag(0) = (b - a) / (ab + 2.0);
  for (Eigen::Index k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    diag(k) = (b * b - a * a) / (s * (s + 2.0));
  }
  for (Eigen::Index k = 1; k < n; ++k) {
    double beta;
    if (k == 1) {
      beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      const double kk = static_cast<double>(k);
      const double s = 2.0 * kk + ab;
      beta = 4.0 * kk * (kk + a) * (kk + b) * (kk + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    sub(k - 1) = std::sqrt(beta);
  }

  GaussRule rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  const double log_mu0 = (ab + 1.0) * std::log(2.0) + specfun::gamma_ln(a + 1.0) + specfun::gamma_ln(b + 1.0) -
                         specfun::gamma_ln(ab + 2.0);
  if (count == 1) {
    rule.nodes[0] = diag(0);
    rule.weights[0] = std::exp(log_mu0);
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw AccuracyError("gauss_jacobi: eigen solve failed", 0.0);

  // Christoffel weights: w_i = C / ((1 - x_i^2) P_N'(x_i)^2) with
  // C = 2^{a+b+1} Γ(N+a+1)Γ(N+b+1) / (Γ(N+a+b+1) N!).
  const double N = count;
  const long double C = std::exp((ab + 1.0) * std::log(2.0) + specfun::gamma_ln(N + a + 1.0) +
                                 specfun::gamma_ln(N + b + 1.0) - specfun::gamma_ln(N + ab + 1.0) -
                                 specfun::gamma_ln(N + 1.0));
  for (Eigen::Index k = 0; k < n; ++k) {
    long double x = solver.eigenvalues()(k);
    long double deriv = 1.0L;
    for (int iter = 0; iter < 6; ++iter) {
      const long double p = jacobi_p(count, a, b, x);
      deriv = 0.5L * (N + ab + 1.0L) * jacobi_p(count - 1, a + 1.0, b + 1.0, x);
      const long double dx = p / deriv;
      x -= dx;
      if (std::abs(dx) < 1e-21L) break;
    }
    deriv = 0.5L * (N + ab + 1.0L) * jacobi_p(count - 1, a + 1.0, b + 1.0, x);
    rule.nodes[k] = x;
    rule.weights[k] = C / ((1.0L - x * x) * deriv * deriv);
  }
  if (a == b) {
    for (int i = 0; i < count / 2; ++i) {
      const int j = count - 1 - i;
      const long double x = 0.5L * (rule.nodes[j] - rule.nodes[i]);
      const long double w = 0.5L * (rule.weights[i] + rule.weights[j]);
      rule.nodes[i] = -x;
      rule.nodes[j] = x;
      rule.weights[i] = w;
      rule.weights[j] = w;
    }
    if (count % 2 == 1) rule.nodes[count / 2] = 0.0L;
  }
  return rule;
}

IntervalRule build_kink_rule(int n, double kink, int degree) {
  if (n < 2) throw DomainError("interval rule: dimension must be >= 2");
  if (degree < 1) throw DomainError("interval rule: degree must be >= 1");
  if (!(kink >= 0.0)) throw DomainError("interval rule: kink exponent must be >= 0");
  const double alpha = 0.5 * (n - 3);
  // s = t^2 on each half: weight s^{(kink-1)/2} (1-s)^alpha on [0,1].
  const double a = alpha;
  const double b = 0.5 * (kink - 1.0);
  const int count = degree / 4 + 1;
  const GaussRule jac = gauss_jacobi(count, a, b);
  const long double scale = std::exp(-(a + b + 1.0) * std::log(2.0));

  IntervalRule rule;
  rule.weight_exponent = alpha;
  rule.kink_exponent = kink;
  rule.degree = 4 * count - 1;
  rule.nodes.resize(2 * count);
  rule.weights.resize(2 * count);
  for (int i = 0; i < count; ++i) {
    const long double s = 0.5L * (1.0L + jac.nodes[i]);
    const long double t = std::sqrt(s);
    const long double w = 0.5L * scale * jac.weights[i];
    // ascending order: negatives first
    rule.nodes[count - 1 - i] = -t;
    rule.weights[count - 1 - i] = w;
    rule.nodes[count + i] = t;
    rule.weights[count + i] = w;
  }
  return rule;
}

IntervalRule build_interval_rule(int n, int degree) { return build_kink_rule(n, 0.0, degree); }

SphereGrid::SphereGrid(int n, int resolution, std::vector<double> coords, std::vector<double> weights)
    : n_(n), resolution_(resolution), coords_(std::move(coords)), weights_(std::move(weights)) {
  if (coords_.size() != weights_.size() * static_cast<std::size_t>(n_)) {
    throw DomainError("SphereGrid: coordinate/weight size mismatch");
  }
}

SphereGrid build_grid(int n, int resolution) {
  check_supported(n);
  if (resolution < 4) throw DomainError("build_grid: resolution must be >= 4");

  std::vector<double> coords;
  std::vector<double> weights;
  if (n == 2) {
    // Four quadrant arcs; θ ↦ θ + π maps arc k onto arc k+2, so the grid is antipodal.
    const int per_arc = resolution / 2 + 12;
    const GaussRule gl = gauss_jacobi(per_arc, 0.0, 0.0);
    const double half = 0.25 * kPi;
    for (int arc = 0; arc < 4; ++arc) {
      const double mid = (arc + 0.5) * 0.5 * kPi;
      for (int i = 0; i < per_arc; ++i) {
        const double theta = mid + half * static_cast<double>(gl.nodes[i]);
        coords.push_back(std::cos(theta));
        coords.push_back(std::sin(theta));
        weights.push_back(half * static_cast<double>(gl.weights[i]));
      }
    }
    // Exact antipodes for arcs 2 and 3.
    const std::size_t shift = 2 * static_cast<std::size_t>(per_arc);
    for (std::size_t i = 0; i < shift; ++i) {
      coords[2 * (i + shift)] = -coords[2 * i];
      coords[2 * (i + shift) + 1] = -coords[2 * i + 1];
    }
  } else {
    const int polar = resolution / 2 + 1;
    const int azimuth = 2 * polar;
    const GaussRule gl = gauss_jacobi(polar, 0.0, 0.0);
    const double dphi = 2.0 * kPi / azimuth;
    coords.reserve(3 * static_cast<std::size_t>(polar * azimuth));
    for (int i = 0; i < polar; ++i) {
      const double t = static_cast<double>(gl.nodes[i]);
      const double rho = static_cast<double>(std::sqrt(std::max(0.0L, 1.0L - gl.nodes[i] * gl.nodes[i])));
      for (int k = 0; k < azimuth; ++k) {
        double c, s;
        if (k >= polar) {
          // φ + π partner of azimuth index k - polar; exact negation keeps antipodes exact
          const double phi = (k - polar) * dphi;
          c = -std::cos(phi);
          s = -std::sin(phi);
        } else {
          const double phi = k * dphi;
          c = std::cos(phi);
          s = std::sin(phi);
        }
        coords.push_back(rho * c);
        coords.push_back(rho * s);
        coords.push_back(t);
        weights.push_back(static_cast<double>(gl.weights[i]) * dphi);
      }
    }
  }
  return SphereGrid(n, resolution, std::move(coords), std::move(weights));
}

SphereGrid build_kernel_rule(std::span<const double> pole, double q, int resolution) {
  const int n = static_cast<int>(pole.size());
  check_supported(n);
  if (resolution < 4) throw DomainError("build_kernel_rule: resolution must be >= 4");
  const IntervalRule polar = build_kink_rule(n, q, resolution);

  std::vector<double> coords;
  std::vector<double> weights;
  if (n == 2) {
    const double perp[2] = {-pole[1], pole[0]};
    for (std::size_t i = 0; i < polar.size(); ++i) {
      const double t = static_cast<double>(polar.nodes[i]);
      const double rho = static_cast<double>(std::sqrt(std::max(0.0L, 1.0L - polar.nodes[i] * polar.nodes[i])));
      for (double sign : {1.0, -1.0}) {
        coords.push_back(t * pole[0] + sign * rho * perp[0]);
        coords.push_back(t * pole[1] + sign * rho * perp[1]);
        weights.push_back(static_cast<double>(polar.weights[i]));
      }
    }
  } else {
    double e1[3], e2[3];
    complete_basis(pole, e1, e2);
    const int azimuth = resolution + 2;
    const double dphi = 2.0 * kPi / azimuth;
    for (std::size_t i = 0; i < polar.size(); ++i) {
      const double t = static_cast<double>(polar.nodes[i]);
      const double rho = static_cast<double>(std::sqrt(std::max(0.0L, 1.0L - polar.nodes[i] * polar.nodes[i])));
      for (int k = 0; k < azimuth; ++k) {
        const double c = std::cos(k * dphi);
        const double s = std::sin(k * dphi);
        for (int d = 0; d < 3; ++d) coords.push_back(t * pole[d] + rho * (c * e1[d] + s * e2[d]));
        weights.push_back(static_cast<double>(polar.weights[i]) * dphi);
      }
    }
  }
  return SphereGrid(n, resolution, std::move(coords), std::move(weights));
}

void write_grid_csv(const SphereGrid& grid, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open grid file for writing: " + path.string());
  const int n = grid.dimension();
  for (int d = 1; d <= n; ++d) out << 'x' << d << ',';
  out << "w\n";
  char buf[64];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto x = grid.node(i);
    for (int d = 0; d < n; ++d) {
      std::snprintf(buf, sizeof buf, "%.17g,", x[d]);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g\n", grid.weight(i));
    out << buf;
  }
  if (!out) throw std::runtime_error("error writing grid file: " + path.string());
}

SphereGrid read_grid_csv(const std::filesystem::path& path, int resolution) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open grid file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty grid file: " + path.string());
  const int n = static_cast<int>(std::count(line.begin(), line.end(), ','));
  if (n < 2) throw std::runtime_error("malformed grid header in " + path.string());
  std::vector<double> coords;
  std::vector<double> weights;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
    if (static_cast<int>(values.size()) != n + 1) {
      throw std::runtime_error("malformed grid row in " + path.string());
    }
    coords.insert(coords.end(), values.begin(), values.end() - 1);
    weights.push_back(values.back());
  }
  return SphereGrid(n, resolution, std::move(coords), std::move(weights));
}

SphereGrid cached_grid(int n, int resolution, const std::optional<std::filesystem::path>& cache_dir) {
  if (!cache_dir) return build_grid(n, resolution);
  const auto file = *cache_dir / ("grid_n" + std::to_string(n) + "_r" + std::to_string(resolution) + ".csv");
  if (std::filesystem::exists(file)) return read_grid_csv(file, resolution);
  SphereGrid grid = build_grid(n, resolution);
  std::filesystem::create_directories(*cache_dir);
  write_grid_csv(grid, file);
  return grid;
}

}  // namespace lqembed
