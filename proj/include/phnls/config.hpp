#pragma once

#include "phnls/diagnostics.hpp"
#include "phnls/error.hpp"
#include "phnls/ground_state.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace phnls {

/// A config file that is malformed, incomplete or out of range. The
/// message names the offending key.
class ConfigError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

struct GridConfig {
  int hermite_modes = 64;
  std::vector<int> z_points;
  std::vector<double> z_length;
  int quadrature_nodes = 0;

  GridPtr make() const;
};

struct TimeConfig {
  double dt = 1e-3;
  double t_max = 1.0;
  int sample_stride = 10;
};

enum class InitialKind { Gaussian, GroundStateScaled, File, Random };

struct InitialConfig {
  InitialKind kind = InitialKind::Gaussian;
  double amplitude = 1.0;
  double width_y = 1.0;
  double width_z = 1.0;
  std::vector<double> offset_z;
  std::vector<double> phase_velocity;
  std::string path;
};

struct ExperimentConfig {
  ModelParams model;
  GridConfig grid;
  TimeConfig time;
  DetectorOptions detectors;
  InitialConfig initial;
  PetviashviliOptions ground_state;
  /// Explicit threshold, or a ground-state summary to read it from.
  std::optional<double> beta;
  std::string beta_cache;
  std::uint64_t seed = 0;
  std::string output_dir = "out";
};

/// Parses and validates. Throws ConfigError naming the key.
ExperimentConfig parse_config(const nlohmann::ordered_json &j);
ExperimentConfig load_config(const std::string &path);
nlohmann::ordered_json to_json(const ExperimentConfig &cfg);

nlohmann::ordered_json model_json(const ModelParams &p);
nlohmann::ordered_json grid_json(const Grid &g);

} // namespace phnls
