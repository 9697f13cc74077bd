#include "tvd/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tvd/adaptive.hpp"
#include "tvd/csv.hpp"

namespace tvd {

namespace {

std::string trim(const std::string& s) {
    const char* ws = " \t\r\n";
    const auto a = s.find_first_not_of(ws);
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(ws);
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw std::invalid_argument(key + ": invalid number '" + v + "'");
    return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw std::invalid_argument(key + ": invalid integer '" + v + "'");
    return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::invalid_argument(key + ": invalid boolean '" + v + "'");
}

// "index:delay;index:delay;..." with absolute delays.
std::vector<DelayStep> parse_steps(const std::string& key, const std::string& v) {
    std::vector<DelayStep> steps;
    if (trim(v).empty()) return steps;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ';')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument(key + ": expected index:delay pairs");
        DelayStep s;
        s.index = static_cast<std::size_t>(parse_u64(key, trim(item.substr(0, colon))));
        s.delay = parse_double(key, trim(item.substr(colon + 1)));
        steps.push_back(s);
    }
    return steps;
}

std::string steps_to_string(const std::vector<DelayStep>& steps) {
    std::string out;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (i > 0) out += ';';
        out += std::to_string(steps[i].index) + ":" + format_double(steps[i].delay);
    }
    return out;
}

}  // namespace

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
    if (key == "algorithm") {
        cfg.algorithm = algorithm_from_string(value);
    } else if (key == "k_max") {
        cfg.k_max = static_cast<int>(parse_u64(key, value));
    } else if (key == "rate") {
        cfg.rate = parse_double(key, value);
    } else if (key == "epsilon") {
        cfg.epsilon = parse_double(key, value);
    } else if (key == "record_length") {
        cfg.record_length = static_cast<std::size_t>(parse_u64(key, value));
    } else if (key == "bandwidth") {
        cfg.bandwidth = parse_double(key, value);
    } else if (key == "snr_db") {
        cfg.snr_db = parse_double(key, value);
    } else if (key == "scenario") {
        cfg.scenario = scenario_from_string(value);
    } else if (key == "constant_delay") {
        cfg.constant_delay = parse_double(key, value);
    } else if (key == "profile_initial") {
        cfg.profile_initial = parse_double(key, value);
    } else if (key == "profile_steps") {
        cfg.profile_steps = parse_steps(key, value);
    } else if (key == "n_realizations") {
        cfg.n_realizations = static_cast<std::size_t>(parse_u64(key, value));
    } else if (key == "base_seed") {
        cfg.base_seed = parse_u64(key, value);
    } else if (key == "burn_in") {
        cfg.burn_in = static_cast<std::size_t>(parse_u64(key, value));
    } else if (key == "track_weights") {
        cfg.track_weights = parse_bool(key, value);
    } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

std::string config_to_text(const ExperimentConfig& cfg) {
    // The echoed config is fully resolved: defaults are materialized so the
    // file reproduces the campaign byte for byte when fed back in.
    const double eps = cfg.epsilon < 0.0 ? default_epsilon(cfg.k_max) : cfg.epsilon;
    std::string out;
    out += "algorithm = " + to_string(cfg.algorithm) + "\n";
    out += "k_max = " + std::to_string(cfg.k_max) + "\n";
    out += "rate = " + format_double(cfg.rate) + "\n";
    out += "epsilon = " + format_double(eps) + "\n";
    out += "record_length = " + std::to_string(cfg.record_length) + "\n";
    out += "bandwidth = " + format_double(cfg.bandwidth) + "\n";
    out += "snr_db = " + format_double(cfg.snr_db) + "\n";
    out += "scenario = " + to_string(cfg.scenario) + "\n";
    out += "constant_delay = " + format_double(cfg.constant_delay) + "\n";
    out += "profile_initial = " + format_double(cfg.profile_initial) + "\n";
    out += "profile_steps = " + steps_to_string(cfg.profile_steps) + "\n";
    out += "n_realizations = " + std::to_string(cfg.n_realizations) + "\n";
    out += "base_seed = " + std::to_string(cfg.base_seed) + "\n";
    out += "burn_in = " + std::to_string(cfg.burn_in) + "\n";
    out += std::string("track_weights = ") + (cfg.track_weights ? "true" : "false") + "\n";
    return out;
}

ExperimentConfig config_from_text(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line missing '=': " + stripped);
        apply_config_entry(cfg, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    }
    return cfg;
}

void save_config(const std::string& path, const ExperimentConfig& cfg,
                 const std::string& trailing_comment) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << config_to_text(cfg);
    if (!trailing_comment.empty()) f << trailing_comment;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open config file " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return config_from_text(buf.str());
}

}  // namespace tvd
