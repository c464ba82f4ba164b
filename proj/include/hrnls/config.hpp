#pragma once

#include "hrnls/driver.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hrnls {

/// Names accepted by make_preset.
const std::vector<std::string>& preset_names();

/// Experiment configurations:
///   single_soliton          travelling soliton, hr mode, ETOL 5e-3
///   single_soliton_tolprop  same problem with ETOL 1e-8 for tolerance studies
///   two_soliton             collision of two solitons over [0, 45]
///   three_soliton           sech pulse with q = 18 over five periods
///   r_only_table6           single soliton, fixed N = 50, T = 1
///   uniform_baseline        single soliton on a frozen uniform mesh, N = 78
/// Throws ConfigError for an unknown name.
RunConfig make_preset(std::string_view name);

/// Fixed uniform N = 2000 run of the same problem with a tight tolerance.
RunConfig make_reference_config(const RunConfig& base);

/// Sets one dotted key from its text value. Throws ConfigError naming the key.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Applies a "key=value" override.
void apply_override(RunConfig& config, std::string_view assignment);

/// Parses the key-value text format on top of `base`.
///
/// One `key = value` per line; `#` starts a comment; `[section]` headers prefix
/// the following keys with `section.`. A `preset = <name>` line (first, if
/// present) replaces the base. Unknown keys are rejected.
RunConfig parse_config_text(std::string_view text, const RunConfig& base = RunConfig{});

/// Throws ConfigError if the file cannot be read.
RunConfig parse_config_file(const std::filesystem::path& path, const RunConfig& base = RunConfig{});

/// Serialises every key, in a form parse_config_text reads back identically.
std::string to_config_text(const RunConfig& config);

/// All recognised keys in serialisation order.
std::vector<std::string> config_keys();

/// Shortest decimal form that round-trips the double exactly.
std::string format_double(double value);

} // namespace hrnls
