#include "sls/harness/settings.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <string>

#include "sls/error.hpp"

namespace sls::harness {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_real(const std::string& key, const std::string& value) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ConfigError("config key " + key + ": \"" + value + "\" is not a number");
    }
    return x;
}

std::size_t to_count(const std::string& key, const std::string& value) {
    std::size_t x = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ConfigError("config key " + key + ": \"" + value + "\" is not a non-negative integer");
    }
    return x;
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "on") return true;
    if (value == "false" || value == "0" || value == "off") return false;
    throw ConfigError("config key " + key + ": \"" + value + "\" is not a boolean");
}

} // namespace

void SettingsDraft::set(const std::string& raw_key, const std::string& raw_value) {
    std::string key = trim(raw_key);
    std::replace(key.begin(), key.end(), '-', '_');
    const std::string value = trim(raw_value);

    if (key == "k") sls.k = to_count(key, value);
    else if (key == "window") sls.window = to_count(key, value);
    else if (key == "rank") sls.rank = to_count(key, value);
    else if (key == "h_thres") sls.h_thres = to_real(key, value);
    else if (key == "alpha_max") sls.alpha_max = to_real(key, value);
    else if (key == "gamma") sls.gamma = to_real(key, value);
    else if (key == "s_h") sls.s_h = to_real(key, value);
    else if (key == "s_d") sls.s_d = to_real(key, value);
    else if (key == "h_0") sls.h_0 = to_real(key, value);
    else if (key == "d_0") sls.d_0 = to_real(key, value);
    else if (key == "epsilon") sls.epsilon = to_real(key, value);
    else if (key == "svd_tol") sls.svd_tol = to_real(key, value);
    else if (key == "entropy_gate") sls.entropy_gate = to_bool(key, value);
    else if (key == "fixed_alpha") {
        if (value == "none" || value.empty()) sls.fixed_alpha.reset();
        else sls.fixed_alpha = to_real(key, value);
    }
    else if (key == "tau") tau = to_real(key, value);
    else if (key == "eminf_steps") eminf.steps = static_cast<int>(to_count(key, value));
    else if (key == "eminf_learning_rate") eminf.learning_rate = to_real(key, value);
    else if (key == "eminf_threshold") eminf.entropy_threshold = to_real(key, value);
    else throw ConfigError("unknown config key \"" + key + "\"");

    explicit_keys.insert(key);
}

MethodSettings SettingsDraft::resolve() const {
    eminf.validate();
    if (!(tau > 0.0)) {
        throw ConfigError("temperature tau must be > 0");
    }
    return MethodSettings{SlsConfig(sls), tau, eminf};
}

void apply_config_file(const std::filesystem::path& path, SettingsDraft& draft) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file: " + path.string());
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        if (trim(line).empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected key=value");
        }
        try {
            draft.set(line.substr(0, eq), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

nlohmann::ordered_json config_echo(const MethodSettings& s) {
    const auto& p = s.sls.params();
    nlohmann::ordered_json j;
    j["k"] = p.k;
    j["window"] = p.window;
    j["rank"] = p.rank;
    j["h_thres"] = p.h_thres;
    j["alpha_max"] = p.alpha_max;
    j["gamma"] = p.gamma;
    j["s_h"] = p.s_h;
    j["s_d"] = p.s_d;
    j["h_0"] = p.h_0;
    j["d_0"] = p.d_0;
    j["epsilon"] = p.epsilon;
    j["svd_tol"] = p.svd_tol;
    j["entropy_gate"] = p.entropy_gate;
    j["fixed_alpha"] = p.fixed_alpha ? nlohmann::ordered_json(*p.fixed_alpha) : nlohmann::ordered_json(nullptr);
    j["tau"] = s.tau;
    j["eminf_steps"] = s.eminf.steps;
    j["eminf_learning_rate"] = s.eminf.learning_rate;
    j["eminf_threshold"] = s.eminf.entropy_threshold;
    return j;
}

} // namespace sls::harness
