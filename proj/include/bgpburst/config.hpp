#pragma once

#include <filesystem>
#include <string_view>

#include "bgpburst/detector.hpp"

namespace bgpburst {

/// Environment variable naming the default config file.
inline constexpr const char* config_env_var = "BGPBURST_CONFIG";

/// Sets one key (r, omega, delta, warmup, variance_floor, min_events).
/// `r` also accepts a fraction such as "1/300". Throws ConfigError.
void apply_config_entry(DetectorConfig& config, std::string_view key,
                        std::string_view value);

/// Accepts a JSON object or `key = value` lines ('#' starts a comment).
DetectorConfig parse_detector_config(std::string_view text,
                                     DetectorConfig base = {});

DetectorConfig load_detector_config(const std::filesystem::path& path,
                                    DetectorConfig base = {});

} // namespace bgpburst
