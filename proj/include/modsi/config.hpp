#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "modsi/ecg.hpp"
#include "modsi/experiment.hpp"

namespace modsi {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr const char* kToolkitVersion = "1.0.0";

/// One run configuration. Relative paths inside it resolve against base_dir.
struct RunConfig {
  SweepConfig sweep;
  EcgOptions ecg;
  PulseTrainDefaults ecg_train;
};

/// Parse a JSON configuration document; throws ConfigError with the offending key.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = ".");
RunConfig load_config(const std::filesystem::path& path);

}  // namespace modsi
