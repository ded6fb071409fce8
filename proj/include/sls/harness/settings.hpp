#pragma once

#include <filesystem>
#include <set>
#include <string>

#include <json.hpp>

#include "sls/harness/methods.hpp"

namespace sls::harness {

// Mutable staging area for configuration resolution:
// built-in defaults < config file < command-line flags.
struct SettingsDraft {
    SlsParams sls;
    double tau = 0.7;
    EmInfConfig eminf;
    std::set<std::string> explicit_keys;  // keys set by file or flag

    // key=value assignment; throws ConfigError on an unknown key or bad value.
    void set(const std::string& key, const std::string& value);
    bool is_explicit(const std::string& key) const { return explicit_keys.count(key) != 0; }

    MethodSettings resolve() const;
};

// Reads `key = value` lines; '#' starts a comment, blank lines are skipped.
// Keys: k, window, rank, h_thres, alpha_max, gamma, s_h, s_d, h_0, d_0,
// epsilon, svd_tol, plus tau, eminf_steps, eminf_learning_rate,
// eminf_threshold, entropy_gate, fixed_alpha.
void apply_config_file(const std::filesystem::path& path, SettingsDraft& draft);

nlohmann::ordered_json config_echo(const MethodSettings& settings);

} // namespace sls::harness
