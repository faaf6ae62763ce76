#include "heli/config.hpp"

#include <algorithm>
#include <fstream>

#include "heli/errors.hpp"

namespace heli {

namespace {
std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}
} // namespace

void Config::load_file(const std::string& path, const std::vector<std::string>& known_keys) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config: cannot open " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("config: malformed line " + std::to_string(lineno) + ": '" + t +
                              "'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty() || value.empty() || value.find('=') != std::string::npos)
            throw ConfigError("config: malformed line " + std::to_string(lineno) + ": '" + t +
                              "'");
        if (!known_keys.empty() &&
            std::find(known_keys.begin(), known_keys.end(), key) == known_keys.end())
            warnings_.push_back("unknown key '" + key + "' (line " + std::to_string(lineno) + ")");
        values_[key] = value;
    }
}

std::optional<std::string> Config::get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string Config::get_or(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
}

double Config::get_double(const std::string& key, double fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    try {
        return std::stod(*v);
    } catch (...) {
        throw ConfigError("config: key '" + key + "' is not a number: '" + *v + "'");
    }
}

int Config::get_int(const std::string& key, int fallback) const {
    auto v = get(key);
    if (!v) return fallback;
    try {
        return std::stoi(*v);
    } catch (...) {
        throw ConfigError("config: key '" + key + "' is not an integer: '" + *v + "'");
    }
}

} // namespace heli
