#pragma once

// JSON serialization of certificates, densities and search results.

#include <filesystem>

#include "json.hpp"
#include "lqembed/certify.hpp"
#include "lqembed/inversion.hpp"
#include "lqembed/norms.hpp"

namespace lqembed {

nlohmann::json to_json(const EmbeddingCertificate& c);
nlohmann::json to_json(const ConvexityResult& c);
nlohmann::json to_json(const NormSpec& norm);

/// {n, q, r, M_used, truncation_bound, uniform_bound, coefficients: [[m, j, value]]}
nlohmann::json to_json(const DensityResult& d);
DensityResult density_from_json(const nlohmann::json& j);

DensityResult read_density(const std::filesystem::path& path);
void write_json(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace lqembed
