#include "lqembed/harmonics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "lqembed/errors.hpp"

namespace lqembed {

namespace {

constexpr double kPi = std::numbers::pi;

void check_supported(int n) {
  if (n != 2 && n != 3) throw UnsupportedDimension(n);
}

std::int64_t binomial(std::int64_t top, std::int64_t k) {
  if (k < 0 || top < k) return 0;
  k = std::min(k, top - k);
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (top - k + i) / i;
  return r;
}

void basis_circle(int max_degree, std::span<const double> x, std::span<double> out) {
  const double inv_sqrt_pi = 1.0 / std::sqrt(kPi);
  out[0] = 1.0 / std::sqrt(2.0 * kPi);
  double c = 1.0, s = 0.0;
  for (int m = 1; m <= max_degree; ++m) {
    const double cn = c * x[0] - s * x[1];
    const double sn = c * x[1] + s * x[0];
    c = cn;
    s = sn;
    out[2 * m - 1] = c * inv_sqrt_pi;
    out[2 * m] = s * inv_sqrt_pi;
  }
}

// Fully normalized associated Legendre functions with the (1-t^2)^{k/2} factor
// carried by Re/Im (x + iy)^k, so the recurrence never divides by sin θ.
void basis_sphere(int max_degree, std::span<const double> x, std::span<double> out) {
  const double t = x[2];
  const int L = max_degree;
  std::vector<double> diag(L + 1);  // R_k^k
  diag[0] = 1.0 / std::sqrt(4.0 * kPi);
  for (int k = 1; k <= L; ++k) diag[k] = diag[k - 1] * std::sqrt((2.0 * k + 1.0) / (2.0 * k));

  double ck = 1.0, sk = 0.0;  // Re, Im of (x + iy)^k
  std::vector<double> col(L + 1);
  for (int k = 0; k <= L; ++k) {
    if (k > 0) {
      const double cn = ck * x[0] - sk * x[1];
      const double sn = ck * x[1] + sk * x[0];
      ck = cn;
      sk = sn;
    }
    col[k] = diag[k];
    if (k + 1 <= L) col[k + 1] = std::sqrt(2.0 * k + 3.0) * t * diag[k];
    for (int l = k + 2; l <= L; ++l) {
      const double a_l = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(k) * k));
      const double a_prev =
          std::sqrt((4.0 * (l - 1) * (l - 1) - 1.0) / (static_cast<double>(l - 1) * (l - 1) - static_cast<double>(k) * k));
      col[l] = a_l * (t * col[l - 1] - col[l - 2] / a_prev);
    }
    for (int l = k; l <= L; ++l) {
      const std::size_t base = static_cast<std::size_t>(l) * l;
      if (k == 0) {
        out[base] = col[l];
      } else {
        out[base + 2 * k - 1] = std::numbers::sqrt2 * col[l] * ck;
        out[base + 2 * k] = std::numbers::sqrt2 * col[l] * sk;
      }
    }
  }
}

}  // namespace

std::int64_t dim_harmonics(int n, int m) {
  if (n < 2 || m < 0) throw DomainError("dim_harmonics: requires n >= 2 and m >= 0");
  // Homogeneous polynomials of degree m minus those of degree m - 2.
  return binomial(m + n - 1, n - 1) - binomial(m + n - 3, n - 1);
}

std::size_t basis_size(int n, int max_degree) {
  check_supported(n);
  const auto L = static_cast<std::size_t>(max_degree);
  return n == 2 ? 2 * L + 1 : (L + 1) * (L + 1);
}

std::size_t basis_index(int n, int m, int j) {
  check_supported(n);
  if (m < 0 || j < 1 || j > dim_harmonics(n, m)) {
    throw DomainError("basis_index: (m=" + std::to_string(m) + ", j=" + std::to_string(j) + ") out of range");
  }
  if (n == 2) return m == 0 ? 0 : static_cast<std::size_t>(2 * m - 2 + j);
  return static_cast<std::size_t>(m) * m + static_cast<std::size_t>(j - 1);
}

void basis_all(int max_degree, std::span<const double> x, std::span<double> out) {
  const int n = static_cast<int>(x.size());
  check_supported(n);
  if (out.size() < basis_size(n, max_degree)) throw DomainError("basis_all: output span too small");
  if (n == 2) {
    basis_circle(max_degree, x, out);
  } else {
    basis_sphere(max_degree, x, out);
  }
}

double basis_eval(int n, int m, int j, std::span<const double> x) {
  if (static_cast<int>(x.size()) != n) throw DomainError("basis_eval: point dimension mismatch");
  const std::size_t idx = basis_index(n, m, j);
  std::vector<double> all(basis_size(n, m));
  basis_all(m, x, all);
  return all[idx];
}

HarmonicCoefficients::HarmonicCoefficients(int n, int max_degree)
    : n_(n), max_degree_(max_degree), values_(basis_size(n, max_degree), 0.0) {
  if (max_degree < 0) throw DomainError("HarmonicCoefficients: max_degree must be >= 0");
}

double HarmonicCoefficients::degree_norm(int m) const {
  if (m < 0 || m > max_degree_) return 0.0;
  double acc = 0.0;
  const auto count = dim_harmonics(n_, m);
  const std::size_t base = basis_index(n_, m, 1);
  for (std::int64_t j = 0; j < count; ++j) acc += values_[base + j] * values_[base + j];
  return std::sqrt(acc);
}

void HarmonicCoefficients::refresh_even() {
  even_ = true;
  for (int m = 1; m <= max_degree_ && even_; m += 2) {
    const std::size_t base = basis_index(n_, m, 1);
    for (std::int64_t j = 0; j < dim_harmonics(n_, m); ++j) {
      if (values_[base + j] != 0.0) {
        even_ = false;
        break;
      }
    }
  }
}

HarmonicCoefficients HarmonicCoefficients::resized(int max_degree) const {
  HarmonicCoefficients out(n_, max_degree);
  const std::size_t keep = std::min(values_.size(), out.values_.size());
  std::copy(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(keep), out.values_.begin());
  out.projected_ = projected_;
  out.refresh_even();
  return out;
}

HarmonicCoefficients expand(const SphereGrid& grid, std::span<const double> samples, int max_degree) {
  const int n = grid.dimension();
  if (samples.size() != grid.size()) throw DomainError("expand: one sample per grid node required");
  if (grid.resolution() < 2 * max_degree) {
    throw ResolutionError("expand: grid resolution " + std::to_string(grid.resolution()) +
                          " is below 2*M = " + std::to_string(2 * max_degree));
  }
  HarmonicCoefficients c(n, max_degree);
  auto acc = c.values();
  std::vector<double> y(acc.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    basis_all(max_degree, grid.node(i), y);
    const double wh = grid.weight(i) * samples[i];
    for (std::size_t k = 0; k < y.size(); ++k) acc[k] += wh * y[k];
  }

  double total = 0.0;
  for (double v : acc) total += v * v;
  const double scale = std::max(1.0, std::sqrt(total));
  double odd_max = 0.0;
  for (int m = 1; m <= max_degree; m += 2) odd_max = std::max(odd_max, c.degree_norm(m));
  const bool even = odd_max <= 1e-10 * scale;
  for (int m = 0; m <= max_degree; ++m) {
    const std::size_t base = basis_index(n, m, 1);
    for (std::int64_t j = 0; j < dim_harmonics(n, m); ++j) {
      double& v = acc[base + j];
      if (std::abs(v) < 1e-14 || (even && m % 2 == 1)) v = 0.0;
    }
  }
  c.set_projected(true);
  c.refresh_even();
  return c;
}

double evaluate(const HarmonicCoefficients& c, std::span<const double> x) {
  if (static_cast<int>(x.size()) != c.dimension()) throw DomainError("evaluate: point dimension mismatch");
  std::vector<double> y(c.values().size());
  basis_all(c.max_degree(), x, y);
  double acc = 0.0;
  const auto v = c.values();
  for (std::size_t k = 0; k < y.size(); ++k) acc += v[k] * y[k];
  return acc;
}

double addition_theorem_sum(int n, int m, std::span<const double> x) {
  if (static_cast<int>(x.size()) != n) throw DomainError("addition_theorem_sum: point dimension mismatch");
  std::vector<double> y(basis_size(n, m));
  basis_all(m, x, y);
  double acc = 0.0;
  for (std::size_t k = basis_index(n, m, 1); k < y.size(); ++k) acc += y[k] * y[k];
  return acc;
}

HarmonicCoefficients laplace_beltrami_apply(const HarmonicCoefficients& c, int r) {
  if (r < 0) throw DomainError("laplace_beltrami_apply: power must be >= 0");
  const int n = c.dimension();
  HarmonicCoefficients out = c;
  auto v = out.values();
  for (int m = 0; m <= c.max_degree(); ++m) {
    const double factor = std::pow(-static_cast<double>(m) * (m + n - 2), r);
    const std::size_t base = basis_index(n, m, 1);
    for (std::int64_t j = 0; j < dim_harmonics(n, m); ++j) v[base + j] *= factor;
  }
  return out;
}

double l2_norm(const HarmonicCoefficients& c) {
  double acc = 0.0;
  for (double v : c.values()) acc += v * v;
  return std::sqrt(acc);
}

void write_coefficients_csv(const HarmonicCoefficients& c, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open coefficient file for writing: " + path.string());
  out << "# n=" << c.dimension() << ",max_degree=" << c.max_degree() << ",even=" << (c.even() ? 1 : 0) << "\n";
  out << "m,j,value\n";
  char buf[64];
  for (int m = 0; m <= c.max_degree(); ++m) {
    for (int j = 1; j <= dim_harmonics(c.dimension(), m); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", c.at(m, j));
      out << m << ',' << j << ',' << buf << '\n';
    }
  }
  if (!out) throw std::runtime_error("error writing coefficient file: " + path.string());
}

HarmonicCoefficients read_coefficients_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open coefficient file: " + path.string());
  std::string header;
  std::getline(in, header);
  int n = 0, max_degree = 0, even = 0;
  if (std::sscanf(header.c_str(), "# n=%d,max_degree=%d,even=%d", &n, &max_degree, &even) != 3) {
    throw std::runtime_error("malformed coefficient header in " + path.string());
  }
  HarmonicCoefficients c(n, max_degree);
  std::string line;
  std::getline(in, line);  // column names
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int m = 0, j = 0;
    double v = 0.0;
    if (std::sscanf(line.c_str(), "%d,%d,%lf", &m, &j, &v) != 3) {
      throw std::runtime_error("malformed coefficient row in " + path.string() + ": " + line);
    }
    c.set(m, j, v);
  }
  c.refresh_even();
  if (even && !c.even()) throw std::runtime_error("coefficient file flagged even but has odd-degree entries");
  return c;
}

}  // namespace lqembed
