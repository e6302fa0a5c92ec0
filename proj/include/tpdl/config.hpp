#pragma once

// Strict key = value configuration handling: '#' comments, unknown keys rejected
// by name, TPDL_<KEY> environment overrides, and a canonical FNV-1a hash so every
// artifact can state exactly which configuration produced it.

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tpdl/errors.hpp"

extern "C" char** environ;

namespace tpdl {

using KeyValues = std::map<std::string, std::string>;

namespace detail {
inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}
} // namespace detail

inline KeyValues parse_config_text(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (kv.count(key)) throw ConfigError("duplicate config key '" + key + "'");
        kv[key] = value;
    }
    return kv;
}

inline KeyValues read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

// Applies TPDL_<UPPERCASE KEY> environment overrides.  Unrecognized TPDL_
// variables are an error so typos cannot silently change nothing.
inline void apply_env_overrides(KeyValues& kv, const std::set<std::string>& known_keys) {
    for (char** e = environ; e && *e; ++e) {
        const std::string entry(*e);
        if (entry.rfind("TPDL_", 0) != 0) continue;
        const std::size_t eq = entry.find('=');
        if (eq == std::string::npos) continue;
        std::string key = entry.substr(5, eq - 5);
        for (auto& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (!known_keys.count(key))
            throw ConfigError("environment override TPDL_" + entry.substr(5, eq - 5) +
                              " does not match any config key");
        kv[key] = entry.substr(eq + 1);
    }
}

inline void reject_unknown_keys(const KeyValues& kv, const std::set<std::string>& known_keys) {
    for (const auto& [key, value] : kv)
        if (!known_keys.count(key)) throw ConfigError("unknown config key '" + key + "'");
}

// Canonical hash over sorted "key=value\n" lines.
inline std::string config_hash(const KeyValues& kv) {
    std::uint64_t h = 1469598103934665603ull;
    const auto mix = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    for (const auto& [key, value] : kv) {
        mix(key);
        mix("=");
        mix(value);
        mix("\n");
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

// --- typed value parsing -------------------------------------------------

inline double parse_double(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        if (s == "inf") return std::numeric_limits<double>::infinity();
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse '" + s + "' as a number");
    }
}

inline long parse_long(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse '" + s + "' as an integer");
    }
}

inline bool parse_bool(const std::string& s, const std::string& key) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw ConfigError("config key '" + key + "': cannot parse '" + s + "' as a boolean");
}

inline std::vector<double> parse_double_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    if (detail::trim(s).empty()) return out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(parse_double(detail::trim(item), key));
    return out;
}

// Time grids: "geometric:<t0>:<t1>:<count>" (count >= 2, geometric spacing,
// endpoints included) or an explicit comma-separated list.
inline std::vector<double> parse_time_grid(const std::string& s, const std::string& key) {
    if (s.rfind("geometric:", 0) == 0) {
        std::istringstream in(s.substr(10));
        std::string a, b, c;
        if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c, ':'))
            throw ConfigError("config key '" + key + "': expected geometric:<t0>:<t1>:<count>");
        const double t0 = parse_double(a, key), t1 = parse_double(b, key);
        const long count = parse_long(c, key);
        if (!(t0 > 0.0) || !(t1 > t0) || count < 2)
            throw ConfigError("config key '" + key + "': need 0 < t0 < t1 and count >= 2");
        std::vector<double> out(count);
        const double ratio = std::log(t1 / t0) / (count - 1);
        for (long i = 0; i < count; ++i) out[i] = t0 * std::exp(ratio * i);
        out.back() = t1;
        return out;
    }
    auto out = parse_double_list(s, key);
    if (out.empty()) throw ConfigError("config key '" + key + "': empty time grid");
    return out;
}

} // namespace tpdl
