#pragma once

// Run configuration: a sectioned key = value text format with unit-suffixed
// keys. Parsing is strict: unknown keys are rejected and physical parameters
// have no silent defaults.

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "coswitch/core.hpp"
#include "coswitch/errors.hpp"
#include "coswitch/junction.hpp"

namespace coswitch {

struct RunConfig {
    // section -> key -> raw value
    std::map<std::string, std::map<std::string, std::string>> sections;

    bool has(const std::string& section, const std::string& key) const {
        auto s = sections.find(section);
        return s != sections.end() && s->second.count(key) > 0;
    }

    const std::string& raw(const std::string& section, const std::string& key) const {
        auto s = sections.find(section);
        if (s == sections.end()) throw ConfigError("missing section [" + section + "]");
        auto k = s->second.find(key);
        if (k == s->second.end())
            throw ConfigError("missing key '" + key + "' in section [" + section + "]");
        return k->second;
    }

    double get_double(const std::string& section, const std::string& key) const {
        const std::string& v = raw(section, key);
        std::size_t pos = 0;
        double out;
        try {
            out = std::stod(v, &pos);
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "' in [" + section + "]: not a number: '" + v + "'");
        }
        if (pos != v.size())
            throw ConfigError("key '" + key + "' in [" + section + "]: trailing junk: '" + v + "'");
        return out;
    }

    int get_int(const std::string& section, const std::string& key) const {
        const double d = get_double(section, key);
        const int i = static_cast<int>(d);
        if (d != static_cast<double>(i))
            throw ConfigError("key '" + key + "' in [" + section + "]: expected an integer");
        return i;
    }

    double get_double_or(const std::string& section, const std::string& key, double fallback) const {
        return has(section, key) ? get_double(section, key) : fallback;
    }
};

namespace detail {
inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}
}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
            section = detail::trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(line_no) + ": empty section name");
            cfg.sections[section];
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        if (section.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
        const std::string key = detail::trim(t.substr(0, eq));
        const std::string value = detail::trim(t.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
        if (!cfg.sections[section].emplace(key, value).second)
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    return cfg;
}

// Rejects any key the given command does not understand.
inline void check_known_keys(
    const RunConfig& cfg,
    const std::map<std::string, std::set<std::string>>& allowed) {
    for (const auto& [section, keys] : cfg.sections) {
        auto it = allowed.find(section);
        if (it == allowed.end()) throw ConfigError("unknown section [" + section + "]");
        for (const auto& [key, value] : keys) {
            if (!it->second.count(key))
                throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
        }
    }
}

inline const std::set<std::string>& device_keys() {
    static const std::set<std::string> keys{
        "line_inductance_nH", "line_capacitance_fF",  "jj_self_capacitance_fF",
        "squid_self_capacitance_fF", "n_units", "unit_pitch_um", "edge_style"};
    return keys;
}

inline const std::set<std::string>& squid_keys() {
    static const std::set<std::string> keys{"junction_critical_current_uA", "asymmetry",
                                            "self_capacitance_fF"};
    return keys;
}

inline const std::set<std::string>& sweep_keys() {
    static const std::set<std::string> keys{"f_start_GHz", "f_stop_GHz", "f_points", "flux_start",
                                            "flux_stop",   "flux_points", "z0_ohm"};
    return keys;
}

inline DeviceParams device_from_config(const RunConfig& cfg) {
    DeviceParams d;
    d.line_inductance = cfg.get_double("device", "line_inductance_nH") * 1e-9;
    d.line_capacitance = cfg.get_double("device", "line_capacitance_fF") * 1e-15;
    d.jj_self_capacitance = cfg.get_double_or("device", "jj_self_capacitance_fF", 0.0) * 1e-15;
    d.squid_self_capacitance =
        cfg.get_double_or("device", "squid_self_capacitance_fF", 0.0) * 1e-15;
    d.n_units = cfg.get_int("device", "n_units");
    d.unit_pitch = cfg.get_double("device", "unit_pitch_um") * 1e-6;
    if (cfg.has("device", "edge_style")) {
        const std::string& style = cfg.raw("device", "edge_style");
        if (style == "plain")
            d.edge_style = EdgeStyle::Plain;
        else if (style == "symmetrized")
            d.edge_style = EdgeStyle::SymmetrizedEdges;
        else
            throw ConfigError("edge_style must be 'plain' or 'symmetrized', got '" + style + "'");
    }
    const auto report = validate_device(d);
    if (!report.passed()) throw ConfigError("device section: " + report.violations.front());
    return d;
}

inline SquidModel squid_from_config(const RunConfig& cfg) {
    SquidModel s;
    s.junction_critical_current = cfg.get_double("squid", "junction_critical_current_uA") * 1e-6;
    s.asymmetry = cfg.get_double_or("squid", "asymmetry", 0.0);
    s.self_capacitance = cfg.get_double_or("squid", "self_capacitance_fF", 0.0) * 1e-15;
    if (!(s.junction_critical_current > 0.0))
        throw ConfigError("squid section: junction_critical_current_uA must be positive");
    if (!(s.asymmetry >= 0.0 && s.asymmetry < 1.0))
        throw ConfigError("squid section: asymmetry must be in [0, 1)");
    return s;
}

struct SweepSpec {
    std::vector<double> frequencies;  // Hz
    std::vector<double> fluxes;
    double z0 = 50.0;
};

inline std::vector<double> linspace(double start, double stop, int points) {
    if (points < 1) throw ConfigError("grid needs at least 1 point");
    if (points == 1) return {start};
    std::vector<double> out(points);
    for (int i = 0; i < points; ++i) out[i] = start + (stop - start) * i / (points - 1);
    return out;
}

inline SweepSpec sweep_from_config(const RunConfig& cfg) {
    SweepSpec s;
    s.frequencies = linspace(cfg.get_double("sweep", "f_start_GHz") * 1e9,
                             cfg.get_double("sweep", "f_stop_GHz") * 1e9,
                             cfg.get_int("sweep", "f_points"));
    s.fluxes = linspace(cfg.get_double("sweep", "flux_start"), cfg.get_double("sweep", "flux_stop"),
                        cfg.get_int("sweep", "flux_points"));
    s.z0 = cfg.get_double("sweep", "z0_ohm");
    if (!(s.z0 > 0.0)) throw ConfigError("sweep section: z0_ohm must be positive");
    return s;
}

// Config text for a device, full precision so parameters round-trip
// losslessly.
inline std::string device_to_config(const DeviceParams& d) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "[device]\n"
                  "line_inductance_nH = %.17g\n"
                  "line_capacitance_fF = %.17g\n"
                  "jj_self_capacitance_fF = %.17g\n"
                  "squid_self_capacitance_fF = %.17g\n"
                  "n_units = %d\n"
                  "unit_pitch_um = %.17g\n"
                  "edge_style = %s\n",
                  d.line_inductance * 1e9, d.line_capacitance * 1e15,
                  d.jj_self_capacitance * 1e15, d.squid_self_capacitance * 1e15, d.n_units,
                  d.unit_pitch * 1e6, d.edge_style == EdgeStyle::Plain ? "plain" : "symmetrized");
    return buf;
}

}  // namespace coswitch
