#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace coverlab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key = value configuration with `include <path>` lines providing
// defaults: keys already present are never overridden by an included file.
// '#' starts a comment; later lines in the same file override earlier ones.
class ExperimentConfig {
  public:
    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_string(const std::string& text);

    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    const std::string& require_str(const std::string& key) const;
    std::string get_str(const std::string& key, const std::string& fallback) const;
    double require_num(const std::string& key) const;
    double get_num(const std::string& key, double fallback) const;
    std::size_t require_count(const std::string& key) const;
    std::size_t get_count(const std::string& key, std::size_t fallback) const;
    std::uint64_t require_u64(const std::string& key) const;
    bool get_flag(const std::string& key, bool fallback) const;
    std::vector<double> get_num_list(const std::string& key) const;  // comma-separated

    void set(const std::string& key, std::string value) { kv_[key] = std::move(value); }

    const std::map<std::string, std::string>& entries() const { return kv_; }

  private:
    std::map<std::string, std::string> kv_;
};

}  // namespace coverlab
