#pragma once

// Closed-form continuum model of the coupled lumped-element lines:
// dispersion, carrier/envelope decomposition, the cos^2/sin^2 power split,
// phase velocities, characteristic impedance and switching-time estimates.

#include <algorithm>
#include <cmath>

#include "coswitch/core.hpp"
#include "coswitch/errors.hpp"

namespace coswitch {

// Wavenumbers are in rad/unit. Positive branch throughout; chi is reported
// as the nonnegative envelope wavenumber.
struct ModeSolution {
    double k_plus = 0.0;
    double k_minus = 0.0;
    double carrier = 0.0;   // K = (k- + k+)/2
    double envelope = 0.0;  // |chi| = |k- - k+|/2
};

struct SplitPrediction {
    double p21 = 0.0;
    double p31 = 0.0;
    double phase_diff = -pi / 2.0;  // outputs 2 and 3, flux independent
};

struct SwitchingTime {
    double tau_jj = 0.0;     // SQUID plasma response
    double tau_12 = 0.0;     // propagation at the constant phase velocity
    double tau_13 = 0.0;     // propagation at the variable phase velocity
    double tau_total = 0.0;  // tau_jj + the longest propagation delay
};

namespace detail {
inline void require_positive(double v, const char* name) {
    if (!(v > 0.0)) throw NonPositiveInput(std::string(name) + " must be positive");
}
inline void require_nonnegative(double v, const char* name) {
    if (v < 0.0) throw NonPositiveInput(std::string(name) + " must be nonnegative");
}
}  // namespace detail

inline ModeSolution dispersion(double omega, double line_l, double line_c, double coupling_l) {
    detail::require_positive(omega, "omega");
    detail::require_positive(line_l, "line inductance");
    detail::require_positive(line_c, "line capacitance");
    detail::require_nonnegative(coupling_l, "coupling inductance");
    const double klc = omega * std::sqrt(line_l * line_c);
    ModeSolution m;
    m.k_minus = klc;
    m.k_plus = klc * std::sqrt(1.0 + 2.0 * coupling_l / line_l);
    m.carrier = 0.5 * (m.k_minus + m.k_plus);
    m.envelope = 0.5 * (m.k_plus - m.k_minus);
    return m;
}

// Accumulated envelope phase chi*N over the whole chain (nonnegative).
inline double coupling_phase(double omega, double line_l, double line_c, double coupling_l,
                             int n_units) {
    if (n_units < 1) throw NonPositiveInput("n_units must be at least 1");
    return dispersion(omega, line_l, line_c, coupling_l).envelope * n_units;
}

inline SplitPrediction split_prediction(double chi_n) {
    const double c = std::cos(chi_n);
    const double s = std::sin(chi_n);
    SplitPrediction p;
    p.p21 = c * c;
    p.p31 = s * s;
    p.phase_diff = -pi / 2.0;
    return p;
}

struct PhaseVelocities {
    double v_const = 0.0;  // m/s, uncoupled mode
    double v_var = 0.0;    // m/s, coupled mode, flux dependent
};

inline PhaseVelocities phase_velocities(double line_l, double line_c, double coupling_l,
                                        double unit_pitch) {
    detail::require_positive(line_l, "line inductance");
    detail::require_positive(line_c, "line capacitance");
    detail::require_nonnegative(coupling_l, "coupling inductance");
    detail::require_positive(unit_pitch, "unit pitch");
    const double slc = std::sqrt(line_l * line_c);
    PhaseVelocities v;
    v.v_const = unit_pitch / slc;
    v.v_var = unit_pitch / (std::sqrt(1.0 + 2.0 * coupling_l / line_l) * slc);
    return v;
}

// Mean of the two mode impedances; reduces to sqrt(L/C) at zero coupling.
inline double characteristic_impedance(double line_l, double line_c, double coupling_l) {
    detail::require_positive(line_l, "line inductance");
    detail::require_positive(line_c, "line capacitance");
    detail::require_nonnegative(coupling_l, "coupling inductance");
    return 0.5 * (std::sqrt(1.0 + 2.0 * coupling_l / line_l) + 1.0) * std::sqrt(line_l / line_c);
}

inline SwitchingTime switching_time(const DeviceParams& device, double coupling_l_star,
                                    double squid_capacitance) {
    detail::require_positive(coupling_l_star, "effective coupling inductance");
    detail::require_positive(squid_capacitance, "squid capacitance");
    const auto report = validate_device(device);
    if (!report.passed()) throw NonPositiveInput("switching_time: " + report.violations.front());
    const auto v = phase_velocities(device.line_inductance, device.line_capacitance,
                                    coupling_l_star, device.unit_pitch);
    SwitchingTime t;
    t.tau_jj = std::sqrt(coupling_l_star * squid_capacitance);
    t.tau_12 = device.unit_pitch * device.n_units / v.v_const;
    t.tau_13 = device.unit_pitch * device.n_units / v.v_var;
    t.tau_total = t.tau_jj + std::max(t.tau_12, t.tau_13);
    return t;
}

}  // namespace coswitch
