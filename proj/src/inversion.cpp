#include "lqembed/inversion.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "lqembed/errors.hpp"
#include "lqembed/funk_hecke.hpp"

namespace lqembed {

namespace {

constexpr double kUnderflowLog = -700.0;
constexpr int kTailTerms = 20000;

double sup_factor(int n, int m, double log_abs_lambda) {
  return std::exp(-log_abs_lambda) * std::sqrt(static_cast<double>(dim_harmonics(n, m)) / surface_area(n));
}

void require_inputs(const HarmonicCoefficients& H, double q, int r) {
  require_admissible(q);
  const int n = H.dimension();
  if (!(2.0 * r > n + q)) {
    std::ostringstream os;
    os << "smoothness hypothesis 2r > n + q violated (r=" << r << ", n=" << n << ", q=" << q << ")";
    throw HypothesisViolation(os.str());
  }
  if (!H.even()) throw HypothesisViolation("inversion requires an even function (odd-degree coefficients present)");
}

}  // namespace

int auto_smoothness(int n, double q_max) {
  // smallest integer r with 2r > n + q_max + 1
  return static_cast<int>(std::floor(0.5 * (n + q_max + 1.0))) + 1;
}

double residual_tail_estimate(const HarmonicCoefficients& H, double q, int r) {
  const int n = H.dimension();
  const int top = H.max_degree();
  const double threshold = std::max(1e-13 * l2_norm(H), 1e-14);

  std::vector<int> degrees;
  std::vector<double> logs;
  for (int m = 2; m <= top; m += 2) {
    const double norm = H.degree_norm(m);
    if (norm > threshold) {
      degrees.push_back(m);
      logs.push_back(std::log(norm));
    }
  }
  if (degrees.empty()) return 0.0;

  // Decay rate per degree: a fit over the significant degrees in the upper half
  // of the expansion when there are at least two, otherwise the drop from the
  // largest non-constant component to the threshold at the top degree.
  std::vector<double> upper_m, upper_log;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (2 * degrees[i] > top) {
      upper_m.push_back(degrees[i]);
      upper_log.push_back(logs[i]);
    }
  }
  double slope = 0.0;
  double anchor_m = top;
  double anchor_log = std::log(threshold);
  if (upper_m.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < upper_m.size(); ++i) {
      sx += upper_m[i];
      sy += upper_log[i];
      sxx += upper_m[i] * upper_m[i];
      sxy += upper_m[i] * upper_log[i];
    }
    const double k = static_cast<double>(upper_m.size());
    slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    anchor_m = upper_m.back();
    anchor_log = upper_log.back();
  } else {
    const auto peak = std::max_element(logs.begin(), logs.end());
    const int peak_m = degrees[static_cast<std::size_t>(peak - logs.begin())];
    if (peak_m < top) slope = (std::log(threshold) - *peak) / (top - peak_m);
    if (!upper_m.empty()) {
      anchor_m = upper_m.back();
      anchor_log = upper_log.back();
    }
  }
  if (!(slope < 0.0)) {
    // no observable decay: fall back to the L-series bound on the whole Δ^r H
    return l_series_tail(n, q, r, top) * l2_norm(laplace_beltrami_apply(H, r));
  }

  double sum = 0.0;
  int start = top + 1;
  if (start % 2 == 1) ++start;
  for (int m = start; m <= start + 2 * kTailTerms; m += 2) {
    const auto le = lambda_closed_log(n, m, q);
    const double term = sup_factor(n, m, le.log_abs) * std::exp(anchor_log + slope * (m - anchor_m));
    sum += term;
    if (term < 1e-20 * std::max(sum, 1e-300) && m > start + 20) break;
  }
  return sum;
}

DensityResult invert(const HarmonicCoefficients& H, double q, int r, int M) {
  require_inputs(H, q, r);
  if (M < 0 || M % 2 != 0) throw DomainError("invert: M must be a non-negative even integer");
  const int n = H.dimension();

  DensityResult out{HarmonicCoefficients(n, M), q, r, M, 0.0, 0.0};
  const int available = std::min(M, H.max_degree());
  for (int m = 0; m <= available; m += 2) {
    const auto le = lambda_closed_log(n, m, q);
    if (le.log_abs < kUnderflowLog) {
      std::ostringstream os;
      os << "invert: |λ_" << m << "| = exp(" << le.log_abs << ") is too small to invert";
      throw ConditioningError(os.str());
    }
    const double inv = le.sign * std::exp(-le.log_abs);
    for (int j = 1; j <= dim_harmonics(n, m); ++j) out.coefficients.set(m, j, inv * H.at(m, j));
  }
  out.coefficients.set_even(true);

  double trunc = 0.0;
  for (int m = M + 2; m <= H.max_degree(); m += 2) {
    const double norm = H.degree_norm(m);
    if (norm == 0.0) continue;
    trunc += sup_factor(n, m, lambda_closed_log(n, m, q).log_abs) * norm;
  }
  if (H.projected()) trunc += residual_tail_estimate(H, q, r);
  out.truncation_bound = trunc;
  out.uniform_bound = uniform_bound(H, q, r);
  return out;
}

double uniform_bound(const HarmonicCoefficients& H, double q, int r) {
  require_inputs(H, q, r);
  const auto bc = bound_constants(H.dimension(), q, r, 64);
  return bc.K * l2_norm(H) + bc.L * l2_norm(laplace_beltrami_apply(H, r));
}

HarmonicCoefficients forward(const HarmonicCoefficients& b, double q) {
  require_admissible(q);
  if (!b.even()) throw HypothesisViolation("forward requires an even density");
  const int n = b.dimension();
  HarmonicCoefficients out = b;
  for (int m = 0; m <= b.max_degree(); m += 2) {
    const double lambda = lambda_closed(n, m, q);
    for (int j = 1; j <= dim_harmonics(n, m); ++j) out.set(m, j, lambda * b.at(m, j));
  }
  return out;
}

}  // namespace lqembed
