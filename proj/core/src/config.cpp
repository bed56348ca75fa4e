#include "coverlab/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace coverlab {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

void parse_stream(std::istream& in, const std::filesystem::path& base_dir,
                  std::map<std::string, std::string>& kv, int depth);

void parse_file_into(const std::filesystem::path& path,
                     std::map<std::string, std::string>& kv, int depth) {
    if (depth > 8) throw ConfigError("config: include depth exceeds 8");
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    parse_stream(in, path.parent_path(), kv, depth);
}

void parse_stream(std::istream& in, const std::filesystem::path& base_dir,
                  std::map<std::string, std::string>& kv, int depth) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.rfind("include ", 0) == 0) {
            const std::string inc = trim(t.substr(8));
            if (inc.empty()) throw ConfigError("config: empty include path");
            std::map<std::string, std::string> included;
            parse_file_into(base_dir / inc, included, depth + 1);
            // Included keys are defaults: existing keys win.
            for (auto& [k, v] : included) kv.emplace(k, std::move(v));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " is not 'key = value': " + t);
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError("config: empty key at line " + std::to_string(lineno));
        kv[key] = value;
    }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    ExperimentConfig cfg;
    parse_file_into(path, cfg.kv_, 0);
    return cfg;
}

ExperimentConfig ExperimentConfig::from_string(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    parse_stream(in, std::filesystem::current_path(), cfg.kv_, 0);
    return cfg;
}

const std::string& ExperimentConfig::require_str(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("config: missing required key '" + key + "'");
    return it->second;
}

std::string ExperimentConfig::get_str(const std::string& key,
                                      const std::string& fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double ExperimentConfig::require_num(const std::string& key) const {
    const std::string& s = require_str(key);
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' is not a number: " + s);
    }
}

double ExperimentConfig::get_num(const std::string& key, double fallback) const {
    return has(key) ? require_num(key) : fallback;
}

std::size_t ExperimentConfig::require_count(const std::string& key) const {
    const double v = require_num(key);
    if (!(v >= 0) || v != std::floor(v))
        throw ConfigError("config: key '" + key + "' must be a nonnegative integer");
    return static_cast<std::size_t>(v);
}

std::size_t ExperimentConfig::get_count(const std::string& key,
                                        std::size_t fallback) const {
    return has(key) ? require_count(key) : fallback;
}

std::uint64_t ExperimentConfig::require_u64(const std::string& key) const {
    const std::string& s = require_str(key);
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' is not a 64-bit integer: " + s);
    }
}

bool ExperimentConfig::get_flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string& s = require_str(key);
    if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
    if (s == "0" || s == "false" || s == "no" || s == "off") return false;
    throw ConfigError("config: key '" + key + "' is not a boolean: " + s);
}

std::vector<double> ExperimentConfig::get_num_list(const std::string& key) const {
    std::vector<double> out;
    if (!has(key)) return out;
    std::stringstream ss(require_str(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string t = trim(item);
        if (t.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(t, &used));
            if (used != t.size()) throw std::invalid_argument(t);
        } catch (const std::exception&) {
            throw ConfigError("config: key '" + key + "' has a non-numeric item: " + t);
        }
    }
    if (out.empty()) throw ConfigError("config: key '" + key + "' is an empty list");
    return out;
}

}  // namespace coverlab
