#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "warmstandby/bounds.hpp"
#include "warmstandby/coupling.hpp"
#include "warmstandby/exact_markov.hpp"
#include "warmstandby/intensity.hpp"
#include "warmstandby/simulator.hpp"

namespace wsr {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelSection {
  bool exponential = true;
  std::optional<warmstandby::ExpParams> params;  ///< set when exponential
  std::optional<warmstandby::IntensityModel> model;
  warmstandby::FullState initial{};
  warmstandby::FullState initial_hat{warmstandby::Condition::failed, 0.0,
                                     warmstandby::Condition::failed, 0.0};
};

struct CouplingSection {
  std::optional<double> epsilon;  ///< empty means optimise
  warmstandby::CouplingStrategy strategy = warmstandby::CouplingStrategy::pairwise;
  std::size_t n_runs = 1000;
  bool failure_channel = false;
};

struct BoundsSection {
  std::size_t grid_points = 64;
  double grid_lo = 1e-3;
  double grid_hi = 10.0;
};

struct OutputSection {
  std::filesystem::path directory = "out";
  bool csv = true;
  bool text = true;
};

struct ExperimentConfig {
  ModelSection model;
  warmstandby::SimConfig sim;
  CouplingSection coupling;
  BoundsSection bounds;
  OutputSection output;
  bool dump_events = false;  ///< simulate also writes every path's events

  const warmstandby::IntensityModel& intensity_model() const { return *model.model; }
};

/// Parses the INI-style grammar documented in the README. Unknown sections
/// or keys, missing required keys and out-of-range values throw ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace wsr
