#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "swarmetrics/experiment.hpp"

namespace swarmetrics {

/// Schema violation; the message names the offending key path.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

struct OutputSettings {
  std::filesystem::path dir = "swarmetrics-out";
  bool trace = false;
  std::optional<std::size_t> workers;
};

/// JSON document with top-level sections scenario, controllers, sweeps,
/// metrics and output (plus an optional free-text description). Every key is
/// optional; unknown keys are rejected.
struct ConfigFile {
  std::string description;
  ExperimentPlan plan;
  OutputSettings output;
};

ConfigFile parse_config(const std::string& text);
ConfigFile load_config(const std::filesystem::path& path);

/// Effective configuration with all defaults filled in; parses back to an
/// equivalent ConfigFile.
std::string config_to_json(const ConfigFile& config);

}  // namespace swarmetrics
