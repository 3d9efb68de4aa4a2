#include "lqembed/funk_hecke.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "lqembed/errors.hpp"
#include "lqembed/harmonics.hpp"
#include "lqembed/specfun.hpp"

namespace lqembed {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kFarCutoff = 20000;

using specfun::gamma_ln;

// Zonal polynomial recurrences in extended precision for the oracle.
long double zonal_poly(int n, int m, long double t) {
  if (m == 0) return 1.0L;
  long double prev = 1.0L;
  if (n == 2) {
    long double cur = t;
    for (int k = 1; k < m; ++k) {
      const long double next = 2.0L * t * cur - prev;
      prev = cur;
      cur = next;
    }
    return cur;
  }
  const long double nu = 0.5L * (n - 2);
  long double cur = 2.0L * nu * t;
  for (int k = 1; k < m; ++k) {
    const long double next = (2.0L * (k + nu) * t * cur - (k + 2.0L * nu - 1.0L) * prev) / (k + 1.0L);
    prev = cur;
    cur = next;
  }
  return cur;
}

double log_dim(int n, int m) {
  if (m == 0) return 0.0;
  if (n == 2) return std::log(2.0);
  return std::log(2.0 * m + n - 2.0) + gamma_ln(m + n - 2.0) - gamma_ln(m + 1.0) - gamma_ln(n - 1.0);
}

void require_hypothesis(int n, double q, int r) {
  if (!(2.0 * r > n + q)) {
    std::ostringstream os;
    os << "smoothness hypothesis 2r > n + q violated (r=" << r << ", n=" << n << ", q=" << q << ")";
    throw HypothesisViolation(os.str());
  }
}

}  // namespace

double even_integer_distance(double q) {
  const double k = std::max(1.0, std::round(q / 2.0));
  return std::abs(q - 2.0 * k);
}

void require_admissible(double q, double guard) {
  if (!(q > 0.0) || !std::isfinite(q)) {
    std::ostringstream os;
    os << "exponent q must be positive and finite, got " << q;
    throw DomainError(os.str());
  }
  if (even_integer_distance(q) < guard) throw ExcludedExponent(q);
}

LogEigenvalue lambda_closed_log(int n, int m, double q) {
  if (n < 2) throw DomainError("lambda_closed: dimension must be >= 2");
  if (m < 0 || m % 2 != 0) throw DomainError("lambda_closed_log: defined for even m >= 0 only");
  require_admissible(q);
  const double z = 0.5 * (m - q);
  double log_abs = (0.5 * n - 1.0) * std::log(kPi) + gamma_ln(q + 1.0) - (q - 1.0) * std::log(2.0) -
                   gamma_ln(0.5 * (m + n + q));
  int sign = 1;
  if (z < 0.0) {
    // sin(πz) Γ(z) = π / Γ(1 - z), positive
    log_abs += std::log(kPi) - gamma_ln(1.0 - z);
  } else {
    // m even: sin(π(m - q)/2) = (-1)^{m/2 + 1} sin(πq/2)
    double s = std::sin(0.5 * kPi * q);
    if ((m / 2) % 2 == 0) s = -s;
    sign = s > 0.0 ? 1 : -1;
    log_abs += std::log(std::abs(s)) + gamma_ln(z);
  }
  return {log_abs, sign};
}

double lambda_closed(int n, int m, double q) {
  if (m < 0) throw DomainError("lambda_closed: m must be >= 0");
  if (m % 2 == 1) {
    require_admissible(q);
    return 0.0;
  }
  const auto le = lambda_closed_log(n, m, q);
  return le.sign * std::exp(le.log_abs);
}

double lambda_oracle(int n, int m, double q, const IntervalRule& rule) {
  if (n < 2 || m < 0) throw DomainError("lambda_oracle: requires n >= 2, m >= 0");
  if (rule.weight_exponent != 0.5 * (n - 3)) throw DomainError("lambda_oracle: rule weight does not match n");
  const bool kernel_in_weight = rule.kink_exponent == q;
  if (!kernel_in_weight && rule.kink_exponent != 0.0) {
    throw DomainError("lambda_oracle: rule kink exponent must be 0 or q");
  }
  const long double z1 = zonal_poly(n, m, 1.0L);
  const long double integral = rule.integrate([&](long double t) {
    const long double zt = zonal_poly(n, m, t) / z1;
    return kernel_in_weight ? zt : std::pow(std::abs(t), static_cast<long double>(q)) * zt;
  });
  const double omega_lower = 2.0 * std::pow(kPi, 0.5 * (n - 1)) / std::exp(gamma_ln(0.5 * (n - 1)));
  return static_cast<double>(omega_lower * integral);
}

double lambda_oracle_refined(int n, int m, double q, double rel_tol, int max_degree) {
  int degree = std::max(8, m + 4);
  double prev = lambda_oracle(n, m, q, build_kink_rule(n, q, degree));
  for (degree *= 2; degree <= max_degree; degree *= 2) {
    const double cur = lambda_oracle(n, m, q, build_kink_rule(n, q, degree));
    if (std::abs(cur - prev) <= rel_tol * std::max(std::abs(cur), 1e-300)) return cur;
    prev = cur;
  }
  throw AccuracyError("lambda_oracle: refinement did not converge", prev);
}

double c_constant(int n, double q) {
  if (n < 2) throw DomainError("c_constant: dimension must be >= 2");
  if (!(q > 0.0)) throw DomainError("c_constant: q must be positive");
  return std::exp(gamma_ln(0.5 * (n + q)) - gamma_ln(0.5 * (q + 1.0)) - 0.5 * (n - 1) * std::log(kPi)) / 2.0;
}

EigenvalueTable build_eigenvalue_table(int n, double q, int max_degree) {
  require_admissible(q);
  EigenvalueTable table;
  table.n = n;
  table.q = q;
  table.values.resize(static_cast<std::size_t>(max_degree) + 1);
  for (int m = 0; m <= max_degree; ++m) table.values[m] = lambda_closed(n, m, q);
  return table;
}

double l_series_term(int n, double q, int r, int m) {
  const auto le = lambda_closed_log(n, m, q);
  const double log_term =
      -le.log_abs - 2.0 * r * std::log(static_cast<double>(m)) + 0.5 * (log_dim(n, m) - std::log(surface_area(n)));
  return std::exp(log_term);
}

double l_series_tail(int n, double q, int r, int after) {
  require_hypothesis(n, q, r);
  int start = after + 1;
  if (start % 2 == 1) ++start;
  start = std::max(start, 2);
  const int far = std::max(kFarCutoff, start);
  double sum = 0.0;
  for (int m = start; m <= far; m += 2) sum += l_series_term(n, q, r, m);
  // Remainder Σ_{even m > far} s_m with s_m ≈ s_far (m/far)^p, p = n + q - 1 - 2r < -1.
  const double p = n + q - 1.0 - 2.0 * r;
  const double s_far = l_series_term(n, q, r, far);
  if (p < -1.0) sum += s_far * far / (2.0 * (-p - 1.0));
  return sum;
}

BoundConstants bound_constants(int n, double q, int r, int m_cap) {
  require_admissible(q);
  require_hypothesis(n, q, r);
  BoundConstants out;
  out.K = 1.0 / (std::abs(lambda_closed(n, 0, q)) * std::sqrt(surface_area(n)));
  double partial = 0.0;
  for (int m = 2; m <= m_cap; m += 2) partial += l_series_term(n, q, r, m);
  out.tail = l_series_tail(n, q, r, std::max(m_cap, 0));
  out.L = partial + out.tail;
  return out;
}

double decay_exponent_check(const EigenvalueTable& table) {
  if (table.max_degree() < 40) throw DomainError("decay_exponent_check: table must reach m >= 40");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int m = 10; m <= table.max_degree(); m += 2) {
    const double x = std::log(static_cast<double>(m));
    const double y = -std::log(std::abs(table[m]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 5) throw DomainError("decay_exponent_check: insufficient data");
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

}  // namespace lqembed
