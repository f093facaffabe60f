#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "ballfields/laws.hpp"
#include "ballfields/measures.hpp"
#include "ballfields/regimes.hpp"

namespace ballfields {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Validated experiment configuration; every field of the echo is explicit.
struct ExperimentConfig {
  std::uint64_t seed = 0;
  int dimension = 1;
  int threads = 1;
  std::size_t replicates = 1000;
  double threshold = 0.05;
  double fast_path_threshold = 1e4;
  std::string output = "out";
  std::vector<double> theta_grid;  // empty -> auto
  nlohmann::json raw;              // schema-validated echo with defaults filled
};

nlohmann::json load_json(const std::string& path);

/// Parse + validate; throws ConfigError naming the offending field.
ExperimentConfig parse_config(const nlohmann::json& j);

Measure parse_measure(const nlohmann::json& j, int dim);
WeightLaw parse_weight_law(const nlohmann::json& j);
RadiusLaw parse_radius_law(const nlohmann::json& j);
RegimeSpec parse_regime(const nlohmann::json& j, int dim, double alpha, double beta);

/// CSV with a fixed header; floats serialized with 17 significant digits.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::string format_double(double v);

void write_manifest(const std::string& dir, const nlohmann::json& config_echo,
                    std::uint64_t seed, double wall_seconds,
                    const std::string& subcommand);

}  // namespace ballfields
