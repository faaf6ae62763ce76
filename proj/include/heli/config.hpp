#ifndef HELI_CONFIG_HPP
#define HELI_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace heli {

/// key=value option set. File values load first; CLI flags override.
/// Unknown keys warn (collected, not fatal); malformed lines throw
/// ConfigError with the line number.
class Config {
  public:
    Config() = default;

    /// Parses UTF-8 key=value lines ('#' comments and blanks skipped).
    void load_file(const std::string& path, const std::vector<std::string>& known_keys);

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    std::optional<std::string> get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;

    const std::map<std::string, std::string>& values() const { return values_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

  private:
    std::map<std::string, std::string> values_;
    std::vector<std::string> warnings_;
};

} // namespace heli

#endif
