#pragma once

// Inverse problems: coupling-phase extraction from S magnitudes, scalar
// least-squares fit of the bare coupling inductance, device synthesis for
// target specifications and the flux that realizes a wanted inductance.

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "coswitch/continuum.hpp"
#include "coswitch/core.hpp"
#include "coswitch/errors.hpp"
#include "coswitch/junction.hpp"

namespace coswitch {

struct ChiExtraction {
    std::vector<double> frequencies;     // Hz
    std::vector<double> chi_n;           // rad, branch-unwrapped
    std::vector<int> branch_offsets;     // pi multiples chosen per point
};

// chiN = atan2(|S31|, |S21|) per point after total-power normalization,
// then unwrapped along frequency assuming a smooth curve that starts in
// [0, pi/2] at the lowest frequency.
inline ChiExtraction extract_chi(const std::vector<double>& frequencies,
                                 const std::vector<double>& s21_mag,
                                 const std::vector<double>& s31_mag) {
    const std::size_t n = frequencies.size();
    if (n == 0 || s21_mag.size() != n || s31_mag.size() != n)
        throw DegenerateInput("extract_chi: inconsistent input lengths");
    ChiExtraction out;
    out.frequencies = frequencies;
    out.chi_n.resize(n);
    out.branch_offsets.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = s21_mag[i] * s21_mag[i] + s31_mag[i] * s31_mag[i];
        if (s21_mag[i] < 1e-12 && s31_mag[i] < 1e-12)
            throw DegenerateInput("extract_chi: both magnitudes vanish at point " +
                                  std::to_string(i));
        const double norm = std::sqrt(p);  // calibration scale cancels here
        const double raw = std::atan2(s31_mag[i] / norm, s21_mag[i] / norm);
        if (i == 0) {
            out.chi_n[0] = raw;
            out.branch_offsets[0] = 0;
            continue;
        }
        // chi is only known up to k*pi +- raw. Nearest-to-previous cannot
        // tell a fold-through from a reflection right at a pi/2 multiple, so
        // candidates compete against a linear extrapolation of the last two
        // points instead.
        const double prev = out.chi_n[i - 1];
        const double predicted = i >= 2 ? 2.0 * prev - out.chi_n[i - 2] : prev;
        double best = raw;
        int best_k = 0;
        double best_dist = std::abs(raw - predicted);
        const int k0 = static_cast<int>(std::floor(prev / pi));
        for (int k = k0 - 1; k <= k0 + 2; ++k) {
            for (double cand : {k * pi + raw, k * pi - raw}) {
                const double dist = std::abs(cand - predicted);
                if (dist < best_dist) {
                    best_dist = dist;
                    best = cand;
                    best_k = k;
                }
            }
        }
        out.chi_n[i] = best;
        out.branch_offsets[i] = best_k;
    }
    return out;
}

struct FitResult {
    double l_coup = 0.0;                  // bare coupling inductance, H
    std::vector<double> l_coup_star;      // per-frequency effective value, H
    double residual_rms = 0.0;            // rad
    double covariance = 0.0;              // H^2, scalar curvature estimate
};

namespace detail {

// Golden-section minimization of f on [a, b].
inline double golden_minimize(const std::function<double(double)>& f, double a, double b,
                              double rel_tol = 1e-12) {
    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > rel_tol * (std::abs(a) + std::abs(b))) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

// One parabolic refinement step through (x0,f0),(x1,f1),(x2,f2); falls back
// to x1 when the parabola degenerates.
inline double parabolic_step(const std::function<double(double)>& f, double x1, double h) {
    const double x0 = x1 - h, x2 = x1 + h;
    const double f0 = f(x0), f1 = f(x1), f2 = f(x2);
    const double denom = f0 - 2.0 * f1 + f2;
    if (!(denom > 0.0)) return x1;
    const double x_star = x1 + 0.5 * h * (f0 - f2) / denom;
    return f(x_star) < f1 ? x_star : x1;
}

}  // namespace detail

// Scalar least-squares over the bare L_coup. The model chiN uses the Eq.-8
// style effective inductance per frequency point, so one bare value plus
// C_SQUID reproduces a frequency-dependent L_coup*.
inline FitResult fit_lcoup(const ChiExtraction& extraction, double line_l, double line_c,
                           int n_units, double squid_capacitance) {
    const std::size_t n = extraction.frequencies.size();
    if (n < 3) throw DegenerateInput("fit_lcoup: need at least 3 frequency points");
    if (!(line_l > 0.0) || !(line_c > 0.0) || n_units < 1 || squid_capacitance < 0.0)
        throw NonPositiveInput("fit_lcoup: invalid fixed parameters");

    auto model_chi = [&](double l_coup, double omega) -> std::optional<double> {
        double l_star = l_coup;
        if (l_coup > 0.0 && squid_capacitance > 0.0) {
            try {
                const auto eff = effective_inductance(l_coup, squid_capacitance, omega);
                if (eff.capacitive) return std::nullopt;
                l_star = eff.effective;
            } catch (const SelfResonance&) {
                return std::nullopt;
            }
        }
        return coupling_phase(omega, line_l, line_c, l_star, n_units);
    };
    auto residual = [&](double l_coup) {
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double omega = 2.0 * pi * extraction.frequencies[i];
            const auto chi = model_chi(l_coup, omega);
            if (!chi) return 1e12;  // past SQUID self resonance, reject
            const double d = *chi - extraction.chi_n[i];
            ss += d * d;
        }
        return ss;
    };

    // Log-spaced coarse scan, widened up to twice if the minimum sits at the
    // upper edge of the interval.
    const double lo = 1e-15;
    double hi = 2e-9;
    const int scan_points = 96;
    std::size_t arg_min = 0;
    std::vector<double> xs;
    for (int widen = 0;; ++widen) {
        xs.clear();
        const double log_lo = std::log(lo), log_hi = std::log(hi);
        for (int i = 0; i <= scan_points; ++i)
            xs.push_back(std::exp(log_lo + (log_hi - log_lo) * i / scan_points));
        arg_min = 0;
        double best = residual(xs[0]);
        for (std::size_t i = 1; i < xs.size(); ++i) {
            const double r = residual(xs[i]);
            if (r < best) {
                best = r;
                arg_min = i;
            }
        }
        if (arg_min + 1 < xs.size()) break;
        if (widen >= 2)
            throw NoBracket("fit_lcoup: residual monotone over search interval up to " +
                            std::to_string(hi));
        hi *= 4.0;
    }

    double best_l;
    if (arg_min == 0) {
        best_l = xs[0];  // degenerate no-coupling data
    } else {
        best_l = detail::golden_minimize(residual, xs[arg_min - 1], xs[arg_min + 1]);
        best_l = detail::parabolic_step(residual, best_l, 1e-6 * best_l + 1e-18);
    }

    FitResult result;
    result.l_coup = best_l;
    result.l_coup_star.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double omega = 2.0 * pi * extraction.frequencies[i];
        double l_star = best_l;
        if (best_l > 0.0 && squid_capacitance > 0.0)
            l_star = effective_inductance(best_l, squid_capacitance, omega).effective;
        result.l_coup_star[i] = l_star;
    }
    const double rss = residual(best_l);
    result.residual_rms = std::sqrt(rss / n);
    // var(theta) ~ s^2 / (0.5 d^2RSS/dtheta^2)
    const double h = 1e-5 * best_l + 1e-18;
    const double curv = (residual(best_l - h) - 2.0 * rss + residual(best_l + h)) / (h * h);
    if (curv > 0.0 && n > 1) result.covariance = (rss / (n - 1)) / (0.5 * curv);
    return result;
}

struct DesignSpec {
    double f_target = 0.0;              // Hz
    double z_target = 0.0;              // Ohm
    double chi_n_target = pi / 2.0;     // rad, in [0, pi]
    int n_units = 0;
    std::optional<double> line_inductance;  // H, fabrication-fixed
    std::optional<double> l_max;            // H, bound when L is free
    double unit_pitch = 34e-6;              // m
};

struct SynthesisResult {
    DeviceParams device;
    double l_coup = 0.0;  // H
};

// Solves sqrt(L/C) = Z and chiN(omega, L, C, L_coup, N) = chiN_target, with
// L fixed by fabrication (or pinned to its upper bound) and Eq.-7 inverted
// in closed form for L_coup.
inline SynthesisResult synthesize(const DesignSpec& spec) {
    if (!(spec.f_target > 0.0) || !(spec.z_target > 0.0))
        throw NonPositiveInput("synthesize: targets must be positive");
    if (spec.n_units < 1) throw NonPositiveInput("synthesize: n_units must be at least 1");
    if (!(spec.chi_n_target >= 0.0 && spec.chi_n_target <= pi))
        throw Infeasible("synthesize: chi_n_target must lie in [0, pi]");

    double line_l;
    if (spec.line_inductance) {
        line_l = *spec.line_inductance;
        if (spec.l_max && line_l > *spec.l_max)
            throw Infeasible("synthesize: fixed line inductance violates its bound");
    } else if (spec.l_max) {
        line_l = *spec.l_max;
    } else {
        throw Infeasible("synthesize: underdetermined, fix line_inductance or give a bound");
    }
    if (!(line_l > 0.0)) throw NonPositiveInput("synthesize: line inductance must be positive");

    const double line_c = line_l / (spec.z_target * spec.z_target);
    const double omega = 2.0 * pi * spec.f_target;
    const double slc = std::sqrt(line_l * line_c);
    const double r = 1.0 + 2.0 * spec.chi_n_target / (slc * omega * spec.n_units);
    const double l_coup = 0.5 * line_l * (r * r - 1.0);
    if (l_coup < 0.0) throw Infeasible("synthesize: inversion yields negative coupling inductance");

    SynthesisResult out;
    out.device.line_inductance = line_l;
    out.device.line_capacitance = line_c;
    out.device.n_units = spec.n_units;
    out.device.unit_pitch = spec.unit_pitch;
    out.device.edge_style = EdgeStyle::SymmetrizedEdges;
    out.l_coup = l_coup;
    return out;
}

struct UnitCount {
    double n_real = 0.0;
    int n_ceil = 0;
};

inline UnitCount required_units(double frequency_hz, double line_l, double line_c,
                                double coupling_l, double chi_n_target) {
    if (!(frequency_hz > 0.0) || !(line_l > 0.0) || !(line_c > 0.0) || !(coupling_l > 0.0) ||
        !(chi_n_target > 0.0))
        throw NonPositiveInput("required_units: inputs must be positive");
    const double omega = 2.0 * pi * frequency_hz;
    const double per_unit =
        0.5 * (std::sqrt(1.0 + 2.0 * coupling_l / line_l) - 1.0) * std::sqrt(line_l * line_c) * omega;
    UnitCount out;
    out.n_real = chi_n_target / per_unit;
    out.n_ceil = static_cast<int>(std::ceil(out.n_real));
    return out;
}

// Inverse of the effective SQUID inductance on its monotone branch
// phi in [0, 0.5]; bisection, tolerance well below 1e-6 in phi.
inline FluxBias flux_for_lcoup(double target_l_star, const SquidModel& squid, double omega) {
    if (!(target_l_star > 0.0))
        throw NonPositiveInput("flux_for_lcoup: target inductance must be positive");
    auto l_eff = [&](double phi) {
        const double l = squid_inductance(squid, FluxBias{phi});
        if (squid.self_capacitance <= 0.0) return l;
        return effective_inductance(l, squid.self_capacitance, omega).effective;
    };
    const double at_zero = l_eff(0.0);
    double phi_hi = 0.5;
    if (squid.asymmetry == 0.0) {
        // Bare form diverges at half flux: step toward it until bracketed.
        phi_hi = 0.25;
        double step = 0.125;
        for (int i = 0; i < 60 && l_eff(phi_hi) < target_l_star; ++i) {
            phi_hi += step;
            step *= 0.5;
        }
    }
    const double at_hi = l_eff(phi_hi);
    if (target_l_star < at_zero * (1.0 - 1e-12) || target_l_star > at_hi * (1.0 + 1e-12))
        throw OutOfRange("flux_for_lcoup: target outside attainable [" + std::to_string(at_zero) +
                         ", " + std::to_string(at_hi) + "] H");

    double lo = 0.0, hi = phi_hi;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (l_eff(mid) < target_l_star)
            lo = mid;
        else
            hi = mid;
    }
    return FluxBias{0.5 * (lo + hi)};
}

}  // namespace coswitch
