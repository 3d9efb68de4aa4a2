#include "lqembed/report.hpp"

#include <fstream>
#include <variant>

#include "lqembed/errors.hpp"

namespace lqembed {

using nlohmann::json;

json to_json(const EmbeddingCertificate& c) {
  return json{{"q", c.q},
              {"r", c.r},
              {"M", c.M},
              {"lemma2_lhs", c.lemma2_lhs},
              {"c_q", c.c_q},
              {"min_density", c.min_density},
              {"truncation_bound", c.truncation_bound},
              {"quadrature_margin", c.quadrature_margin},
              {"reconstruction_error", c.reconstruction_error},
              {"verdict", to_string(c.verdict)},
              {"seed", c.seed}};
}

json to_json(const ConvexityResult& c) {
  return json{{"pass", c.pass},
              {"worst_margin", c.worst_margin},
              {"min_value", c.min_value},
              {"trials", c.trials},
              {"seed", c.seed}};
}

json to_json(const NormSpec& norm) {
  json j{{"kind", norm.label()}, {"n", norm.dimension()}};
  if (const auto* p = std::get_if<Perturbation>(&norm.kind())) {
    j["lambda"] = p->lambda;
    json coeffs = json::array();
    for (int m = 0; m <= p->f.max_degree(); ++m) {
      for (int jj = 1; jj <= dim_harmonics(p->f.dimension(), m); ++jj) {
        if (p->f.at(m, jj) != 0.0) coeffs.push_back({m, jj, p->f.at(m, jj)});
      }
    }
    j["f"] = coeffs;
  } else if (const auto* l = std::get_if<LqPower>(&norm.kind())) {
    j["k"] = l->k;
    j["lambda"] = l->lambda;
  } else if (const auto* b = std::get_if<LpBall>(&norm.kind())) {
    j["p"] = b->p;
  } else if (const auto* a = std::get_if<QuadraticForm>(&norm.kind())) {
    j["matrix"] = a->matrix;
  }
  return j;
}

json to_json(const DensityResult& d) {
  json coeffs = json::array();
  const auto& c = d.coefficients;
  for (int m = 0; m <= c.max_degree(); ++m) {
    for (int j = 1; j <= dim_harmonics(c.dimension(), m); ++j) {
      if (c.at(m, j) != 0.0) coeffs.push_back({m, j, c.at(m, j)});
    }
  }
  return json{{"n", c.dimension()},
              {"q", d.q},
              {"r", d.r},
              {"M_used", d.M_used},
              {"truncation_bound", d.truncation_bound},
              {"uniform_bound", d.uniform_bound},
              {"coefficients", coeffs}};
}

DensityResult density_from_json(const json& j) {
  const int n = j.at("n").get<int>();
  const int M = j.at("M_used").get<int>();
  DensityResult d{HarmonicCoefficients(n, M), j.at("q").get<double>(), j.at("r").get<int>(), M,
                  j.at("truncation_bound").get<double>(), j.at("uniform_bound").get<double>()};
  for (const auto& entry : j.at("coefficients")) {
    d.coefficients.set(entry.at(0).get<int>(), entry.at(1).get<int>(), entry.at(2).get<double>());
  }
  d.coefficients.refresh_even();
  return d;
}

DensityResult read_density(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open density file: " + path.string());
  try {
    return density_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed density file " + path.string() + ": " + e.what());
  }
}

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("error writing output file: " + path.string());
}

}  // namespace lqembed
