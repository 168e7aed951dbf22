#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "smldm/capacity.hpp"
#include "smldm/model.hpp"

namespace smldm {

/// Flat key-value parameters. Keys use the CLI long-flag spellings
/// (nt, il-db, snr-ml-db, ...).
using ParamMap = std::map<std::string, std::string>;

/// Parses `key = value` lines. `#` starts a comment, blank lines are
/// ignored, repeated keys keep the last value. Unknown keys are rejected.
ParamMap parse_key_values(std::string_view text, std::string_view origin = "<config>");
ParamMap load_key_values(const std::filesystem::path& path);

/// Values from `overrides` win.
void overlay(ParamMap& base, const ParamMap& overrides);

bool is_known_key(std::string_view key);
const std::vector<std::string>& known_keys();

/// "1,2,4,8" or an inclusive range "start:step:stop".
std::vector<double> parse_value_list(std::string_view text);
std::vector<std::string> split_list(std::string_view text);

double parse_double(std::string_view text, std::string_view key);
std::size_t parse_count(std::string_view text, std::string_view key);
std::uint64_t parse_u64(std::string_view text, std::string_view key);

/// SystemConfig from nt, nrm, nrf, il-db, snr-ml-db, snr-fl-db, power;
/// missing keys keep their defaults. The result is validated.
SystemConfig system_config_from(const ParamMap& params);
TdmFdmShare share_from(const ParamMap& params);

/// Applies a swept parameter (n_rm, n_rf, snr_ml_db, snr_fl_db,
/// injection_level_db, n_t) to a config.
void set_parameter(SystemConfig& cfg, std::string_view name, double value);
bool is_sweepable(std::string_view name);

/// Locale-independent shortest round-trip decimal.
std::string format_double(double value);

/// Directory holding the shipped figure presets: $SMLDM_PRESET_DIR, then
/// the source tree, then the install prefix.
std::filesystem::path preset_directory();
std::vector<std::string> preset_names();
ParamMap load_preset(std::string_view name);

}  // namespace smldm
