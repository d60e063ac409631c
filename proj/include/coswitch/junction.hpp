#pragma once

// Small-signal Josephson junction and SQUID inductance models, parasitic
// capacitance corrections and power handling estimates.

#include <cmath>
#include <string>

#include "coswitch/core.hpp"
#include "coswitch/errors.hpp"

namespace coswitch {

struct JunctionSpec {
    double critical_current = 0.0;  // A
    double self_capacitance = 0.0;  // F
};

struct SquidModel {
    double junction_critical_current = 0.0;  // A, per junction
    double asymmetry = 0.0;                  // d in [0, 1)
    double self_capacitance = 0.0;           // F
};

// L with a shunt capacitance folded in: 1/(1/L - w^2 C).
// capacitive = true means the element is above self resonance and the
// returned value is negative.
struct EffectiveInductance {
    double bare = 0.0;       // H
    double effective = 0.0;  // H
    double frequency = 0.0;  // Hz
    bool capacitive = false;
};

inline double jj_inductance(double critical_current) {
    if (!(critical_current > 0.0))
        throw NonPositiveCurrent("jj_inductance: critical current must be positive");
    return constants.flux_quantum / (2.0 * pi * critical_current);
}

// gap_ev is the superconducting gap in eV; the gap expressed in volts equals
// its eV value numerically, so the charge cancels out of Delta*pi/(2 e R_n).
inline double ambegaokar_baratoff_ic(double normal_resistance, double gap_ev) {
    if (!(normal_resistance > 0.0))
        throw NonPositiveInput("ambegaokar_baratoff_ic: resistance must be positive");
    if (!(gap_ev > 0.0))
        throw NonPositiveInput("ambegaokar_baratoff_ic: gap must be positive");
    return pi * gap_ev / (2.0 * normal_resistance);
}

// Flux-tunable SQUID inductance. With d = 0 this is the bare
// Phi0/(4 pi Ic sqrt(cos(pi phi))) form, singular at half flux; with d > 0
// the (cos^2 + d^2 sin^2)^(1/4) regularization keeps it finite everywhere.
inline double squid_inductance(const SquidModel& squid, FluxBias flux) {
    if (!(squid.junction_critical_current > 0.0))
        throw NonPositiveCurrent("squid_inductance: critical current must be positive");
    const double c = std::cos(pi * flux.normalized);
    const double s = std::sin(pi * flux.normalized);
    const double d = squid.asymmetry;
    // cos(pi/2) only reaches ~6e-17 in floating point, so the pole needs a
    // tolerance band rather than an exact-zero test
    if (d == 0.0 && c < 1e-12)
        throw FluxSingularity("squid_inductance: cos(pi*flux) <= 0 with zero asymmetry");
    const double mod = std::pow(c * c + d * d * s * s, 0.25);
    return constants.flux_quantum / (4.0 * pi * squid.junction_critical_current * mod);
}

inline EffectiveInductance effective_inductance(double inductance, double shunt_capacitance,
                                                double omega) {
    if (!(inductance > 0.0))
        throw NonPositiveInput("effective_inductance: inductance must be positive");
    if (shunt_capacitance < 0.0)
        throw NonPositiveInput("effective_inductance: capacitance must be nonnegative");
    const double inv_l = 1.0 / inductance;
    const double denom = inv_l - omega * omega * shunt_capacitance;
    if (std::abs(denom) < 1e-6 * inv_l)
        throw SelfResonance("effective_inductance: element at self resonance");
    EffectiveInductance out;
    out.bare = inductance;
    out.effective = 1.0 / denom;
    out.frequency = omega / (2.0 * pi);
    out.capacitive = denom < 0.0;
    return out;
}

// Power at which the peak current of a matched traveling wave reaches
// safety_fraction * Ic. An order-of-magnitude linearity estimate only.
inline double linear_power_limit(const JunctionSpec& line_junction, double line_impedance,
                                 double safety_fraction) {
    if (!(line_junction.critical_current > 0.0))
        throw NonPositiveInput("linear_power_limit: critical current must be positive");
    if (!(line_impedance > 0.0))
        throw NonPositiveInput("linear_power_limit: impedance must be positive");
    if (!(safety_fraction > 0.0 && safety_fraction <= 1.0))
        throw NonPositiveInput("linear_power_limit: safety fraction must be in (0, 1]");
    const double i_peak = safety_fraction * line_junction.critical_current;
    return 0.5 * i_peak * i_peak * line_impedance;
}

inline double photon_flux(double power_watts, double frequency_hz) {
    if (power_watts < 0.0)
        throw NonPositiveInput("photon_flux: power must be nonnegative");
    if (!(frequency_hz > 0.0))
        throw NonPositiveInput("photon_flux: frequency must be positive");
    return power_watts / (constants.planck_h * frequency_hz);
}

}  // namespace coswitch
