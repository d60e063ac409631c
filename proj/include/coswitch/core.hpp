#pragma once

// Physical constants, unit helpers and the shared device parameter model.
// Everything is SI internally (H, F, Hz, W, m); unit conversions happen only
// at the I/O boundary (config files, CSV).

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "coswitch/errors.hpp"

namespace coswitch {

inline constexpr double pi = std::numbers::pi;

// CODATA 2018, frozen to 10 significant digits.
struct PhysicalConstants {
    double flux_quantum = 2.067833848e-15;   // Wb, h/(2e)
    double electron_charge = 1.602176634e-19;  // C
    double planck_h = 6.626070150e-34;       // J s
};

inline constexpr PhysicalConstants constants{};

enum class EdgeStyle {
    Plain,
    // Half-inductance line junctions at both chain ends, no edge SQUID.
    SymmetrizedEdges,
};

struct DeviceParams {
    double line_inductance = 0.0;        // H per unit
    double line_capacitance = 0.0;       // F per unit
    double jj_self_capacitance = 0.0;    // F
    double squid_self_capacitance = 0.0; // F
    int n_units = 0;
    double unit_pitch = 0.0;             // m
    EdgeStyle edge_style = EdgeStyle::SymmetrizedEdges;
};

struct FluxBias {
    double normalized = 0.0;  // Phi / Phi_0, any real; 1-periodic in consumers
};

struct FrequencyPoint {
    double f = 0.0;       // Hz
    double omega = 0.0;   // rad/s

    static FrequencyPoint from_hz(double f_hz) { return {f_hz, 2.0 * pi * f_hz}; }
};

struct ValidationReport {
    std::vector<std::string> violations;

    bool passed() const { return violations.empty(); }
};

inline ValidationReport validate_device(const DeviceParams& p) {
    ValidationReport r;
    if (!(p.line_inductance > 0.0)) r.violations.push_back("line_inductance must be positive");
    if (!(p.line_capacitance > 0.0)) r.violations.push_back("line_capacitance must be positive");
    if (!(p.jj_self_capacitance >= 0.0)) r.violations.push_back("jj_self_capacitance must be nonnegative");
    if (!(p.squid_self_capacitance >= 0.0)) r.violations.push_back("squid_self_capacitance must be nonnegative");
    if (p.n_units < 1) r.violations.push_back("n_units must be at least 1");
    if (!(p.unit_pitch > 0.0)) r.violations.push_back("unit_pitch must be positive");
    return r;
}

inline double dbm_to_watts(double p_dbm) {
    return 1e-3 * std::pow(10.0, p_dbm / 10.0);
}

inline double watts_to_dbm(double p_watts) {
    return 10.0 * std::log10(p_watts / 1e-3);
}

}  // namespace coswitch
