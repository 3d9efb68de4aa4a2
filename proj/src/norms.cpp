#include "lqembed/norms.hpp"

#include <cmath>
#include <sstream>

#include "lqembed/errors.hpp"

namespace lqembed {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

NormSpec::NormSpec(int n, Kind kind) : n_(n), kind_(std::move(kind)) {
  if (n < 2) throw DomainError("NormSpec: dimension must be >= 2");
  if (const auto* p = std::get_if<Perturbation>(&kind_)) {
    if (p->f.dimension() != n) throw DomainError("NormSpec: perturbation dimension mismatch");
    if (!p->f.even()) throw HypothesisViolation("NormSpec: perturbation f must be even");
  }
  if (const auto* l = std::get_if<LqPower>(&kind_)) {
    if (l->k < 1) throw DomainError("NormSpec: lq-power needs k >= 1");
    if (l->lambda < 0.0) throw DomainError("NormSpec: lq-power needs lambda >= 0");
  }
  if (const auto* b = std::get_if<LpBall>(&kind_)) {
    if (!(b->p >= 1.0)) throw DomainError("NormSpec: lp-ball needs p >= 1");
  }
  if (const auto* a = std::get_if<QuadraticForm>(&kind_)) {
    if (a->matrix.size() != static_cast<std::size_t>(n * n)) throw DomainError("NormSpec: quadratic form must be n x n");
  }
}

NormSpec NormSpec::perturbation(HarmonicCoefficients f, double lambda) {
  const int n = f.dimension();
  return {n, Perturbation{std::move(f), lambda}};
}

double NormSpec::on_sphere(std::span<const double> x) const {
  return std::visit(
      overloaded{
          [](const Euclidean&) { return 1.0; },
          [&](const Perturbation& p) { return 1.0 + p.lambda * evaluate(p.f, x); },
          [&](const LqPower& l) {
            double s = 0.0;
            for (double v : x) s += std::pow(v * v, l.k);
            return std::pow(1.0 + l.lambda * s, 1.0 / (2.0 * l.k));
          },
          [&](const LpBall& b) {
            double s = 0.0;
            for (double v : x) s += std::pow(std::abs(v), b.p);
            return std::pow(s, 1.0 / b.p);
          },
          [&](const QuadraticForm& a) {
            double s = 0.0;
            for (int i = 0; i < n_; ++i)
              for (int j = 0; j < n_; ++j) s += x[i] * a.matrix[i * n_ + j] * x[j];
            return std::sqrt(s);
          },
      },
      kind_);
}

double NormSpec::extended(std::span<const double> x) const {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  if (r2 == 0.0) return 0.0;
  const double r = std::sqrt(r2);
  std::vector<double> u(x.begin(), x.end());
  for (double& v : u) v /= r;
  return r * on_sphere(u);
}

NormSpec NormSpec::with_lambda(double lambda) const {
  NormSpec out = *this;
  if (auto* p = std::get_if<Perturbation>(&out.kind_)) p->lambda = lambda;
  if (auto* l = std::get_if<LqPower>(&out.kind_)) l->lambda = lambda;
  return out;
}

std::string NormSpec::label() const {
  return std::visit(overloaded{
                        [](const Euclidean&) -> std::string { return "euclidean"; },
                        [](const Perturbation&) -> std::string { return "perturbation"; },
                        [](const LqPower& l) -> std::string { return "lq-power:" + std::to_string(l.k); },
                        [](const LpBall& b) -> std::string {
                          std::ostringstream os;
                          os << "lp-ball:" << b.p;
                          return os.str();
                        },
                        [](const QuadraticForm&) -> std::string { return "quadratic"; },
                    },
                    kind_);
}

HarmonicCoefficients zonal_y4(int n) {
  HarmonicCoefficients f(n, 4);
  f.set(4, 1, 1.0);
  f.refresh_even();
  return f;
}

}  // namespace lqembed
