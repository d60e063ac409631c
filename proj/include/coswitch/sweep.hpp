#pragma once

// Flux-frequency sweeps and the analysis passes over them: isolation maps,
// operating-point discovery and beamsplitter-ratio search.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

#include "coswitch/core.hpp"
#include "coswitch/errors.hpp"
#include "coswitch/junction.hpp"
#include "coswitch/network.hpp"

namespace coswitch {

inline constexpr double kIsolationCapDb = 120.0;

// Dense (frequency x flux) table of S-matrices, frequency-major. Singular
// flux points are recorded as holes, not aborts.
struct SweepGrid {
    std::vector<double> frequencies;  // Hz, strictly increasing
    std::vector<double> fluxes;       // Phi/Phi_0, strictly increasing
    std::vector<std::optional<FourPortSMatrix>> cells;
    double z0 = 50.0;

    std::size_t index(std::size_t fi, std::size_t pi) const { return fi * fluxes.size() + pi; }
    const std::optional<FourPortSMatrix>& at(std::size_t fi, std::size_t pi) const {
        return cells[index(fi, pi)];
    }
};

namespace detail {
inline void require_grid_axis(const std::vector<double>& axis, const char* name) {
    if (axis.empty()) throw NonPositiveInput(std::string(name) + " grid must be nonempty");
    for (std::size_t i = 1; i < axis.size(); ++i) {
        if (!(axis[i] > axis[i - 1]))
            throw NonPositiveInput(std::string(name) + " grid must be strictly increasing");
    }
}
}  // namespace detail

inline SweepGrid run_sweep(const DeviceParams& device, const SquidModel& squid,
                           const std::vector<double>& frequencies,
                           const std::vector<double>& fluxes, double z0, int n_threads = 1) {
    detail::require_grid_axis(frequencies, "frequency");
    detail::require_grid_axis(fluxes, "flux");
    if (n_threads < 1) n_threads = 1;

    SweepGrid grid;
    grid.frequencies = frequencies;
    grid.fluxes = fluxes;
    grid.z0 = z0;
    grid.cells.resize(frequencies.size() * fluxes.size());

    const std::size_t total = grid.cells.size();
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            const double f = frequencies[idx / fluxes.size()];
            const double phi = fluxes[idx % fluxes.size()];
            try {
                grid.cells[idx] = solve_device(device, squid, f, FluxBias{phi}, z0);
            } catch (const Error&) {
                grid.cells[idx] = std::nullopt;  // hole
            }
        }
    };
    if (n_threads == 1 || total < 2) {
        work(0, total);
    } else {
        std::vector<std::thread> threads;
        const std::size_t chunk = (total + n_threads - 1) / n_threads;
        for (int t = 0; t < n_threads; ++t) {
            const std::size_t begin = t * chunk;
            if (begin >= total) break;
            threads.emplace_back(work, begin, std::min(begin + chunk, total));
        }
        for (auto& th : threads) th.join();
    }
    return grid;
}

// 20 log10(|S21|/|S31|) per grid point, capped at +-120 dB. Positive means
// the through channel is favored. Holes stay holes.
inline std::vector<std::optional<double>> isolation_ratio(const SweepGrid& grid) {
    if (grid.cells.empty()) throw NonPositiveInput("isolation_ratio: empty grid");
    std::vector<std::optional<double>> out(grid.cells.size());
    for (std::size_t i = 0; i < grid.cells.size(); ++i) {
        if (!grid.cells[i]) continue;
        const double m21 = std::abs(grid.cells[i]->s(1, 0));
        const double m31 = std::abs(grid.cells[i]->s(2, 0));
        double db;
        if (m31 < 1e-12) {
            db = kIsolationCapDb;  // underflow: reported as +inf, capped
        } else if (m21 < 1e-12) {
            db = -kIsolationCapDb;
        } else {
            db = std::clamp(20.0 * std::log10(m21 / m31), -kIsolationCapDb, kIsolationCapDb);
        }
        out[i] = db;
    }
    return out;
}

enum class SwitchState { Through, Cross };

struct OperatingPoint {
    double frequency = 0.0;
    double flux = 0.0;
    SwitchState state = SwitchState::Through;
    double isolation_db = 0.0;     // magnitude, >= threshold by construction
    double bandwidth_hz = 0.0;     // contiguous span above threshold at this flux
    double insertion_loss_db = 0.0;
};

// Magnitude-only view used by both the in-memory finder and the CSV-based
// `points` command.
struct MagnitudeGrid {
    std::vector<double> frequencies;
    std::vector<double> fluxes;
    std::vector<std::optional<double>> s21_db;  // frequency-major
    std::vector<std::optional<double>> s31_db;

    std::size_t index(std::size_t fi, std::size_t pi) const { return fi * fluxes.size() + pi; }

    std::optional<double> isolation(std::size_t fi, std::size_t pi) const {
        const auto& a = s21_db[index(fi, pi)];
        const auto& b = s31_db[index(fi, pi)];
        if (!a || !b) return std::nullopt;
        return std::clamp(*a - *b, -kIsolationCapDb, kIsolationCapDb);
    }
};

inline MagnitudeGrid magnitudes(const SweepGrid& grid) {
    MagnitudeGrid m;
    m.frequencies = grid.frequencies;
    m.fluxes = grid.fluxes;
    m.s21_db.resize(grid.cells.size());
    m.s31_db.resize(grid.cells.size());
    for (std::size_t i = 0; i < grid.cells.size(); ++i) {
        if (!grid.cells[i]) continue;
        const double m21 = std::abs(grid.cells[i]->s(1, 0));
        const double m31 = std::abs(grid.cells[i]->s(2, 0));
        m.s21_db[i] = 20.0 * std::log10(std::max(m21, 1e-300));
        m.s31_db[i] = 20.0 * std::log10(std::max(m31, 1e-300));
    }
    return m;
}

inline std::vector<OperatingPoint> find_operating_points(const MagnitudeGrid& grid,
                                                         double threshold_db = 20.0) {
    if (!(threshold_db > 0.0)) throw NonPositiveInput("find_operating_points: threshold must be positive");
    std::vector<OperatingPoint> points;
    const std::size_t nf = grid.frequencies.size();
    const std::size_t np = grid.fluxes.size();

    auto bandwidth_at = [&](std::size_t fi, std::size_t pi, double sign) {
        // Contiguous frequency span around fi, at fixed flux, where the
        // signed isolation stays beyond the threshold.
        std::size_t lo = fi, hi = fi;
        while (lo > 0) {
            auto v = grid.isolation(lo - 1, pi);
            if (!v || sign * *v < threshold_db) break;
            --lo;
        }
        while (hi + 1 < nf) {
            auto v = grid.isolation(hi + 1, pi);
            if (!v || sign * *v < threshold_db) break;
            ++hi;
        }
        return grid.frequencies[hi] - grid.frequencies[lo];
    };

    for (std::size_t fi = 0; fi < nf; ++fi) {
        std::optional<std::size_t> best_through, best_cross;
        for (std::size_t pi = 0; pi < np; ++pi) {
            auto v = grid.isolation(fi, pi);
            if (!v) continue;
            if (*v > 0 && (!best_through || *v > *grid.isolation(fi, *best_through)))
                best_through = pi;
            if (*v < 0 && (!best_cross || *v < *grid.isolation(fi, *best_cross)))
                best_cross = pi;
        }
        if (best_through) {
            const double iso = *grid.isolation(fi, *best_through);
            if (iso >= threshold_db) {
                OperatingPoint p;
                p.frequency = grid.frequencies[fi];
                p.flux = grid.fluxes[*best_through];
                p.state = SwitchState::Through;
                p.isolation_db = iso;
                p.bandwidth_hz = bandwidth_at(fi, *best_through, +1.0);
                p.insertion_loss_db = -*grid.s21_db[grid.index(fi, *best_through)];
                points.push_back(p);
            }
        }
        if (best_cross) {
            const double iso = -*grid.isolation(fi, *best_cross);
            if (iso >= threshold_db) {
                OperatingPoint p;
                p.frequency = grid.frequencies[fi];
                p.flux = grid.fluxes[*best_cross];
                p.state = SwitchState::Cross;
                p.isolation_db = iso;
                p.bandwidth_hz = bandwidth_at(fi, *best_cross, -1.0);
                p.insertion_loss_db = -*grid.s31_db[grid.index(fi, *best_cross)];
                points.push_back(p);
            }
        }
    }
    return points;
}

inline std::vector<OperatingPoint> find_operating_points(const SweepGrid& grid,
                                                         double threshold_db = 20.0) {
    return find_operating_points(magnitudes(grid), threshold_db);
}

struct SplitterPoint {
    double frequency = 0.0;
    double flux = 0.0;
    double ratio = 0.0;        // |S21/S31|^2
    double total_loss_db = 0.0;
};

// Flux along one frequency row where |S21/S31|^2 hits target_ratio, refined
// by bisection on the continuous flux model.
inline SplitterPoint beamsplitter_point(const SweepGrid& grid, const DeviceParams& device,
                                        const SquidModel& squid, double frequency_hz,
                                        double target_ratio) {
    if (!(target_ratio > 0.0)) throw NonPositiveInput("beamsplitter_point: target ratio must be positive");
    auto it = std::min_element(grid.frequencies.begin(), grid.frequencies.end(),
                               [&](double a, double b) {
                                   return std::abs(a - frequency_hz) < std::abs(b - frequency_hz);
                               });
    if (it == grid.frequencies.end() ||
        std::abs(*it - frequency_hz) > 1e-6 * std::max(1.0, std::abs(frequency_hz)))
        throw NonPositiveInput("beamsplitter_point: frequency not on the sweep grid");
    const std::size_t fi = static_cast<std::size_t>(it - grid.frequencies.begin());
    const double f = *it;

    auto log_excess = [&](double m21, double m31) -> std::optional<double> {
        if (m31 < 1e-12 || m21 < 1e-12) return std::nullopt;  // ratio off the scale
        return 20.0 * std::log10(m21 / m31) - 10.0 * std::log10(target_ratio);
    };

    // Locate a sign change of |S21/S31|^2 - target along the flux row.
    std::optional<std::size_t> prev_idx;
    std::optional<double> prev_val;
    std::optional<std::pair<double, double>> bracket;
    for (std::size_t pi = 0; pi < grid.fluxes.size(); ++pi) {
        const auto& cell = grid.at(fi, pi);
        if (!cell) continue;
        auto v = log_excess(std::abs(cell->s(1, 0)), std::abs(cell->s(2, 0)));
        if (!v) continue;
        if (prev_val && ((*prev_val <= 0.0) != (*v <= 0.0))) {
            bracket = {grid.fluxes[*prev_idx], grid.fluxes[pi]};
            break;
        }
        prev_idx = pi;
        prev_val = v;
    }
    if (!bracket)
        throw NotBracketed("beamsplitter_point: ratio never crosses the target on this row");

    auto eval = [&](double phi) {
        const auto s = solve_device(device, squid, f, FluxBias{phi}, grid.z0);
        return std::pair{std::abs(s.s(1, 0)), std::abs(s.s(2, 0))};
    };
    double lo = bracket->first, hi = bracket->second;
    auto [m21lo, m31lo] = eval(lo);
    double flo = *log_excess(m21lo, m31lo);
    for (int iter = 0; iter < 80 && hi - lo > 1e-10; ++iter) {
        const double mid = 0.5 * (lo + hi);
        auto [m21, m31] = eval(mid);
        auto v = log_excess(m21, m31);
        if (!v) break;
        if ((flo <= 0.0) == (*v <= 0.0)) {
            lo = mid;
            flo = *v;
        } else {
            hi = mid;
        }
    }
    const double phi_star = 0.5 * (lo + hi);
    auto [m21, m31] = eval(phi_star);
    SplitterPoint p;
    p.frequency = f;
    p.flux = phi_star;
    p.ratio = (m21 * m21) / (m31 * m31);
    p.total_loss_db = -10.0 * std::log10(m21 * m21 + m31 * m31);
    return p;
}

}  // namespace coswitch
