#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace dst {

// Line-oriented key=value run configuration with dotted keys
// (dst.epsilon=1e-4). '#' starts a comment; unknown keys are rejected at
// parse time; --set overrides win over file values.
class RunConfig {
  public:
    static RunConfig parse_file(const std::string& path);
    static RunConfig parse_text(std::string_view text, const std::string& origin = "<text>");

    void apply_override(std::string_view assignment);  // "key=value"

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    // Required getters throw ConfigError naming the missing key.
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int64_t get_int(const std::string& key) const;
    int64_t get_int(const std::string& key, int64_t fallback) const;
    uint64_t get_seed(const std::string& key, uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_double_list(const std::string& key) const;
    std::vector<size_t> get_size_list(const std::string& key) const;
    std::vector<uint64_t> get_seed_list(const std::string& key) const;

    const std::map<std::string, std::string>& values() const { return values_; }

    static const std::vector<std::string>& known_keys();

  private:
    void set_checked(const std::string& key, const std::string& value,
                     const std::string& where);

    std::map<std::string, std::string> values_;
};

}  // namespace dst
