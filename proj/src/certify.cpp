#include "lqembed/certify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "lqembed/errors.hpp"
#include "lqembed/funk_hecke.hpp"

namespace lqembed {

namespace {

constexpr double kConvexitySlack = 1e-12;

std::vector<double> unit_normal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> x(n);
  double r2 = 0.0;
  do {
    r2 = 0.0;
    for (double& v : x) {
      v = gauss(rng);
      r2 += v * v;
    }
  } while (r2 < 1e-24);
  const double r = std::sqrt(r2);
  for (double& v : x) v /= r;
  return x;
}

// Orthonormal basis of the tangent space at unit x (n - 1 vectors).
std::vector<std::vector<double>> tangent_basis(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> out;
  for (int axis = 0; axis < n && static_cast<int>(out.size()) < n - 1; ++axis) {
    std::vector<double> v(n, 0.0);
    v[axis] = 1.0;
    auto project_out = [&](std::span<const double> u) {
      double d = 0.0;
      for (int i = 0; i < n; ++i) d += v[i] * u[i];
      for (int i = 0; i < n; ++i) v[i] -= d * u[i];
    };
    project_out(x);
    for (const auto& u : out) project_out(u);
    double norm = 0.0;
    for (double c : v) norm += c * c;
    norm = std::sqrt(norm);
    if (norm < 1e-3) continue;
    for (double& c : v) c /= norm;
    out.push_back(std::move(v));
  }
  return out;
}

double sup_factor(int n, int m, double q) {
  const auto le = lambda_closed_log(n, m, q);
  return std::exp(-le.log_abs) * std::sqrt(static_cast<double>(dim_harmonics(n, m)) / surface_area(n));
}

int expansion_degree(const SphereGrid& grid) {
  int m = grid.resolution() / 2;
  if (m % 2 == 1) --m;
  return m;
}

HarmonicCoefficients expand_power(const NormSpec& norm, double q, const SphereGrid& grid, int degree) {
  HarmonicCoefficients H = expand_function(
      grid, [&](std::span<const double> x) { return std::pow(norm.on_sphere(x), q); }, degree);
  if (!H.even()) throw HypothesisViolation("norm " + norm.label() + " produced a non-even H = N^q");
  return H;
}

void require_positive(const NormSpec& norm, const SphereGrid& grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(norm.on_sphere(grid.node(i)) > 0.0)) {
      throw DomainError("norm " + norm.label() + " is not positive on the sphere");
    }
  }
}

}  // namespace

// ---------------------------------------------------------------- QSet

QSet QSet::make(std::vector<double> samples, double min_guard) {
  if (samples.empty()) throw DomainError("QSet: at least one sample is required");
  std::sort(samples.begin(), samples.end());
  samples.erase(std::unique(samples.begin(), samples.end()), samples.end());
  QSet out;
  out.guard_ = std::numeric_limits<double>::infinity();
  for (double q : samples) {
    if (!(q > 0.0) || !std::isfinite(q)) {
      std::ostringstream os;
      os << "QSet: samples must be positive, got " << q;
      throw DomainError(os.str());
    }
    const double d = even_integer_distance(q);
    if (d < min_guard) throw ExcludedExponent(q);
    out.guard_ = std::min(out.guard_, d);
  }
  out.samples_ = std::move(samples);
  return out;
}

QSet QSet::range(double lo, double hi, int count, double min_guard) {
  if (count < 1) throw DomainError("QSet::range: count must be >= 1");
  if (hi < lo) throw DomainError("QSet::range: hi < lo");
  std::vector<double> s;
  for (int i = 0; i < count; ++i) s.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  return make(std::move(s), min_guard);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::certified_lemma2: return "certified_lemma2";
    case Verdict::certified_positive_density: return "certified_positive_density";
    case Verdict::refuted_negative_density: return "refuted_negative_density";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

bool is_certified(Verdict v) {
  return v == Verdict::certified_lemma2 || v == Verdict::certified_positive_density;
}

// ---------------------------------------------------------------- certificates

std::vector<std::vector<double>> random_unit_points(int n, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(unit_normal(n, rng));
  return out;
}

double min_density(const HarmonicCoefficients& b, const SphereGrid& grid) {
  std::vector<std::pair<double, std::size_t>> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = {evaluate(b, grid.node(i)), i};
  const std::size_t starts = std::min<std::size_t>(8, values.size());
  std::partial_sort(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(starts), values.end());

  double best = values.front().first;
  const double initial_step = std::numbers::pi / (2.0 * std::max(1, b.max_degree()));
  for (std::size_t s = 0; s < starts; ++s) {
    const auto node = grid.node(values[s].second);
    std::vector<double> x(node.begin(), node.end());
    double fx = values[s].first;
    double step = initial_step;
    for (int iter = 0; iter < 400 && step > 1e-8; ++iter) {
      bool moved = false;
      for (const auto& t : tangent_basis(x)) {
        for (double sign : {1.0, -1.0}) {
          std::vector<double> y(x.size());
          double r2 = 0.0;
          for (std::size_t d = 0; d < x.size(); ++d) {
            y[d] = x[d] + sign * step * t[d];
            r2 += y[d] * y[d];
          }
          const double r = std::sqrt(r2);
          for (double& v : y) v /= r;
          const double fy = evaluate(b, y);
          if (fy < fx) {
            x = std::move(y);
            fx = fy;
            moved = true;
            break;
          }
        }
        if (moved) break;
      }
      if (!moved) step *= 0.5;
    }
    best = std::min(best, fx);
  }
  return best;
}

DensityResult density_for(const NormSpec& norm, double q, int r, const SphereGrid& grid, int M) {
  require_admissible(q);
  if (grid.dimension() != norm.dimension()) throw DomainError("grid and norm dimensions differ");
  require_positive(norm, grid);
  const int degree = expansion_degree(grid);
  if (degree < M) {
    throw ResolutionError("grid resolution " + std::to_string(grid.resolution()) + " cannot expand to degree M = " +
                          std::to_string(M));
  }
  return invert(expand_power(norm, q, grid, degree), q, r, M);
}

EmbeddingCertificate certify_lemma2(const NormSpec& norm, double q, int r, const SphereGrid& grid, int M,
                                    const CertifyOptions& options) {
  require_admissible(q);
  const int n = norm.dimension();
  if (grid.dimension() != n) throw DomainError("grid and norm dimensions differ");
  require_positive(norm, grid);
  const int degree = expansion_degree(grid);
  if (degree < M) {
    throw ResolutionError("grid resolution " + std::to_string(grid.resolution()) + " cannot expand to degree M = " +
                          std::to_string(M));
  }

  EmbeddingCertificate cert;
  cert.q = q;
  cert.r = r;
  cert.M = M;
  cert.seed = options.seed;
  cert.c_q = c_constant(n, q);

  const HarmonicCoefficients H = expand_power(norm, q, grid, degree);
  const DensityResult density = invert(H, q, r, M);
  cert.truncation_bound = density.truncation_bound;

  // Quadrature convergence: same expansion on a finer grid, pushed through λ_m^{-1}.
  const SphereGrid finer = build_grid(n, grid.resolution() + 16);
  const HarmonicCoefficients H_fine = expand_power(norm, q, finer, degree);
  double quad = 0.0;
  for (int m = 0; m <= M; m += 2) {
    double diff2 = 0.0;
    for (int j = 1; j <= dim_harmonics(n, m); ++j) {
      const double d = H.at(m, j) - H_fine.at(m, j);
      diff2 += d * d;
    }
    quad += sup_factor(n, m, q) * std::sqrt(diff2);
  }
  cert.quadrature_margin = 10.0 * quad;

  // Sufficient condition K(q)‖H-1‖ + L(q)‖Δ^r H‖ < c(q).
  const auto bc = bound_constants(n, q, r, 64);
  HarmonicCoefficients H_minus_one = H;
  H_minus_one.set(0, 1, H.at(0, 1) - std::sqrt(surface_area(n)));
  cert.lemma2_lhs = bc.K * l2_norm(H_minus_one) + bc.L * l2_norm(laplace_beltrami_apply(H, r));

  const SphereGrid verify_grid = build_grid(n, std::max(4 * M, 32));
  cert.min_density = min_density(density.coefficients, verify_grid);
  cert.reconstruction_error = levy_verify(norm, density.coefficients, q, options.verify_points, options.seed);

  const double margin = cert.truncation_bound + cert.quadrature_margin;
  if (cert.lemma2_lhs < cert.c_q) {
    cert.verdict = Verdict::certified_lemma2;
  } else if (cert.min_density > margin) {
    cert.verdict = Verdict::certified_positive_density;
  } else if (cert.min_density < -margin) {
    cert.verdict = Verdict::refuted_negative_density;
  } else {
    cert.verdict = Verdict::inconclusive;
  }
  return cert;
}

// ---------------------------------------------------------------- verification

double levy_verify(const NormSpec& norm, const HarmonicCoefficients& density, double q, int points,
                   std::uint64_t seed) {
  require_admissible(q, 0.0);
  const int n = norm.dimension();
  if (density.dimension() != n) throw DomainError("levy_verify: density dimension differs from norm");
  const int resolution = std::max(8, density.max_degree() + (density.max_degree() % 2));
  double worst = 0.0;
  for (const auto& x : random_unit_points(n, points, seed)) {
    const SphereGrid rule = build_kernel_rule(x, q, resolution);
    const double represented = rule.integrate([&](std::span<const double> xi) { return evaluate(density, xi); });
    worst = std::max(worst, std::abs(std::pow(norm.on_sphere(x), q) - represented));
  }
  return worst;
}

double even_integer_example(int n, int k, double lambda, int points, std::uint64_t seed) {
  if (k < 1) throw DomainError("even_integer_example: k must be >= 1");
  if (lambda < 0.0) throw DomainError("even_integer_example: lambda must be >= 0");
  const double q = 2.0 * k;
  const double c = c_constant(n, q);
  const SphereGrid grid = build_grid(n, std::max(2 * k + 2, 8));
  double worst = 0.0;
  for (const auto& x : random_unit_points(n, points, seed)) {
    double power_sum = 0.0;
    double atomic = 0.0;
    for (double v : x) {
      power_sum += std::pow(v, 2 * k);
      atomic += std::pow(std::abs(v), q);
    }
    const double uniform = grid.integrate([&](std::span<const double> xi) {
      double d = 0.0;
      for (int i = 0; i < n; ++i) d += x[i] * xi[i];
      return std::pow(d * d, k);
    });
    const double lhs = 1.0 + lambda * power_sum;
    const double rhs = c * uniform + lambda * atomic;
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double hilbertian_check(const NormSpec& norm, const SphereGrid& grid) {
  const int n = norm.dimension();
  if (grid.dimension() != n) throw DomainError("hilbertian_check: grid dimension differs from norm");
  const int unknowns = n * (n + 1) / 2;
  const auto rows = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd design(rows, unknowns);
  Eigen::VectorXd target(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto x = grid.node(static_cast<std::size_t>(i));
    const double sw = std::sqrt(grid.weight(static_cast<std::size_t>(i)));
    int col = 0;
    for (int a = 0; a < n; ++a) {
      for (int b = a; b < n; ++b) design(i, col++) = sw * x[a] * x[b] * (a == b ? 1.0 : 2.0);
    }
    const double N = norm.on_sphere(x);
    target(i) = sw * N * N;
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(target);
  const double residual = (design * coef - target).norm();
  return residual / target.norm();
}

ConvexityResult convexity_check(const NormSpec& norm, int trials, std::uint64_t seed) {
  const int n = norm.dimension();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ConvexityResult out;
  out.trials = trials;
  out.seed = seed;
  out.worst_margin = -std::numeric_limits<double>::infinity();
  out.min_value = std::numeric_limits<double>::infinity();

  for (int t = 0; t < trials; ++t) {
    const auto du = unit_normal(n, rng);
    std::vector<double> dv;
    if (t % 2 == 0) {
      dv = unit_normal(n, rng);
    } else {
      // nearby direction: angular separation log-uniform in [1e-3, 1]
      const double angle = std::exp(std::log(1e-3) * unit(rng));
      const auto dir = unit_normal(n, rng);
      double d = 0.0;
      for (int i = 0; i < n; ++i) d += dir[i] * du[i];
      std::vector<double> tangent(n);
      double tn = 0.0;
      for (int i = 0; i < n; ++i) {
        tangent[i] = dir[i] - d * du[i];
        tn += tangent[i] * tangent[i];
      }
      tn = std::sqrt(tn);
      dv.resize(n);
      for (int i = 0; i < n; ++i) dv[i] = std::cos(angle) * du[i] + std::sin(angle) * tangent[i] / tn;
    }
    const double su = 0.25 + 1.75 * unit(rng);
    const double sv = 0.25 + 1.75 * unit(rng);
    std::vector<double> u(n), v(n), w(n);
    for (int i = 0; i < n; ++i) {
      u[i] = su * du[i];
      v[i] = sv * dv[i];
      w[i] = u[i] + v[i];
    }
    const double nu = norm.on_sphere(du);
    const double nv = norm.on_sphere(dv);
    out.min_value = std::min({out.min_value, nu, nv});
    const double margin = norm.extended(w) - su * nu - sv * nv;
    out.worst_margin = std::max(out.worst_margin, margin);
  }
  out.pass = out.min_value > 0.0 && out.worst_margin <= kConvexitySlack;
  return out;
}

// ---------------------------------------------------------------- λ-search

namespace {

std::vector<EmbeddingCertificate> certify_all(const NormSpec& norm, const std::vector<double>& qs, int r,
                                              const SphereGrid& grid, int M, const CertifyOptions& options) {
  std::vector<std::future<EmbeddingCertificate>> jobs;
  jobs.reserve(qs.size());
  for (double q : qs) {
    jobs.push_back(std::async(std::launch::async, [&, q] { return certify_lemma2(norm, q, r, grid, M, options); }));
  }
  std::vector<EmbeddingCertificate> out;
  out.reserve(qs.size());
  for (auto& job : jobs) out.push_back(job.get());
  return out;
}

struct Probe {
  bool feasible = false;
  ConvexityResult convexity;
  std::vector<EmbeddingCertificate> certificates;
};

Probe probe(const HarmonicCoefficients& f, double lambda, const std::vector<double>& qs, int r,
            const SphereGrid& grid, int M, const SearchOptions& options) {
  Probe p;
  const NormSpec norm = NormSpec::perturbation(f, lambda);
  p.convexity = convexity_check(norm, options.convexity_trials, options.certify.seed);
  if (!p.convexity.pass) return p;
  try {
    p.certificates = certify_all(norm, qs, r, grid, M, options.certify);
  } catch (const DomainError&) {
    return p;  // N not positive on the grid
  }
  p.feasible = std::all_of(p.certificates.begin(), p.certificates.end(),
                           [](const EmbeddingCertificate& c) { return is_certified(c.verdict); });
  return p;
}

SearchResult bisect(const HarmonicCoefficients& f, const std::vector<double>& qs, int r, const SphereGrid& grid,
                    int M, const SearchOptions& options, double hi) {
  SearchResult result;
  result.q_samples = qs;
  Probe top = probe(f, hi, qs, r, grid, M, options);
  ++result.evaluations;
  if (top.feasible) {
    result.feasible = true;
    result.lambda_star = hi;
    result.certificates = std::move(top.certificates);
    result.convexity = top.convexity;
    return result;
  }
  double lo = hi;
  Probe good;
  while (true) {
    hi = lo;
    lo *= 0.5;
    if (lo < options.lambda_min) return result;
    good = probe(f, lo, qs, r, grid, M, options);
    ++result.evaluations;
    if (good.feasible) break;
  }
  while (hi - lo > options.rel_tol * lo) {
    const double mid = 0.5 * (lo + hi);
    Probe p = probe(f, mid, qs, r, grid, M, options);
    ++result.evaluations;
    if (p.feasible) {
      lo = mid;
      good = std::move(p);
    } else {
      hi = mid;
    }
  }
  result.feasible = true;
  result.lambda_star = lo;
  result.certificates = std::move(good.certificates);
  result.convexity = good.convexity;
  return result;
}

double relative_margin(const EmbeddingCertificate& c) {
  return (c.min_density - c.truncation_bound - c.quadrature_margin) / c.c_q;
}

}  // namespace

QSet refine_qset(const QSet& Q, const std::vector<EmbeddingCertificate>& certificates) {
  const auto& qs = Q.samples();
  if (certificates.size() != qs.size()) throw DomainError("refine_qset: one certificate per sample required");
  std::vector<double> out = qs;
  for (std::size_t i = 0; i + 1 < qs.size(); ++i) {
    const double a = relative_margin(certificates[i]);
    const double b = relative_margin(certificates[i + 1]);
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale > 0.0 && std::abs(a - b) > 0.1 * scale) {
      const double mid = 0.5 * (qs[i] + qs[i + 1]);
      if (even_integer_distance(mid) >= Q.guard()) out.push_back(mid);
    }
  }
  return QSet::make(std::move(out), Q.guard());
}

SearchResult search_lambda(const HarmonicCoefficients& f, const QSet& Q, int r, const SphereGrid& grid, int M,
                           const SearchOptions& options) {
  if (!f.even()) throw HypothesisViolation("search_lambda: f must be even");
  if (grid.dimension() != f.dimension()) throw DomainError("search_lambda: grid dimension differs from f");
  for (double q : Q.samples()) {
    if (!(2.0 * r > f.dimension() + q)) {
      throw HypothesisViolation("search_lambda: 2r > n + q must hold for every q in Q");
    }
  }

  if (l2_norm(f) == 0.0) {
    SearchResult result;
    result.hilbertian = true;
    result.feasible = true;
    result.lambda_star = options.lambda_hi;
    result.q_samples = Q.samples();
    const NormSpec norm = NormSpec::perturbation(f, options.lambda_hi);
    result.convexity = convexity_check(norm, options.convexity_trials, options.certify.seed);
    result.certificates = certify_all(norm, Q.samples(), r, grid, M, options.certify);
    result.evaluations = 1;
    return result;
  }

  SearchResult result = bisect(f, Q.samples(), r, grid, M, options, options.lambda_hi);
  if (!options.refine_q || !result.feasible) return result;

  QSet current = Q;
  for (int pass = 0; pass < 3; ++pass) {
    const QSet refined = refine_qset(current, result.certificates);
    if (refined.samples().size() == current.samples().size()) break;
    current = refined;
    const int before = result.evaluations;
    SearchResult next = bisect(f, current.samples(), r, grid, M, options, result.lambda_star);
    next.evaluations += before;
    result = std::move(next);
    if (!result.feasible) break;
  }
  return result;
}

}  // namespace lqembed
