#pragma once

// Command implementations behind the CLI verbs. Kept header-side so the
// integration tests can drive them without spawning processes.

#include <array>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "coswitch/config.hpp"
#include "coswitch/continuum.hpp"
#include "coswitch/fit.hpp"
#include "coswitch/io.hpp"
#include "coswitch/sweep.hpp"

namespace coswitch::cli {

struct CommonOptions {
    int threads = 1;
    std::optional<double> z0_override;  // Ohm
};

inline RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

namespace detail {

inline SweepSpec sweep_with_override(const RunConfig& cfg, const CommonOptions& opt) {
    SweepSpec spec = sweep_from_config(cfg);
    if (opt.z0_override) spec.z0 = *opt.z0_override;
    return spec;
}

inline std::string stem_plus(const std::string& path, const std::string& suffix) {
    const auto dot = path.rfind('.');
    if (dot == std::string::npos || path.find('/', dot) != std::string::npos)
        return path + suffix;
    return path.substr(0, dot) + suffix + path.substr(dot);
}

}  // namespace detail

// simulate: single flux, frequency grid; writes an .s4p and prints band-edge
// and band-center magnitudes.
inline void cmd_simulate(const RunConfig& cfg, const std::string& out_path,
                         const CommonOptions& opt, std::ostream& summary) {
    check_known_keys(cfg, {{"device", device_keys()},
                           {"squid", squid_keys()},
                           {"sweep", sweep_keys()},
                           {"simulate", {"flux"}}});
    const DeviceParams device = device_from_config(cfg);
    const SquidModel squid = squid_from_config(cfg);
    const SweepSpec sweep = detail::sweep_with_override(cfg, opt);
    const double flux = cfg.get_double("simulate", "flux");

    std::vector<FourPortSMatrix> matrices;
    matrices.reserve(sweep.frequencies.size());
    for (double f : sweep.frequencies)
        matrices.push_back(solve_device(device, squid, f, FluxBias{flux}, sweep.z0));

    std::ofstream out(out_path);
    if (!out) throw Error("cannot write '" + out_path + "'");
    write_touchstone_s4p(out, sweep.frequencies, matrices, sweep.z0);

    auto report = [&](const char* label, std::size_t i) {
        auto db = [&](int row) {
            return 20.0 * std::log10(std::max(std::abs(matrices[i].s(row, 0)), 1e-300));
        };
        summary << label << " f = " << format_sig9(sweep.frequencies[i] / 1e9)
                << " GHz: |S21| = " << format_sig9(db(1)) << " dB, |S31| = " << format_sig9(db(2))
                << " dB, |S11| = " << format_sig9(db(0)) << " dB, |S41| = " << format_sig9(db(3))
                << " dB\n";
    };
    report("low ", 0);
    report("mid ", sweep.frequencies.size() / 2);
    report("high", sweep.frequencies.size() - 1);
}

inline void cmd_sweep(const RunConfig& cfg, const std::string& out_path,
                      const CommonOptions& opt) {
    check_known_keys(cfg, {{"device", device_keys()},
                           {"squid", squid_keys()},
                           {"sweep", sweep_keys()}});
    const DeviceParams device = device_from_config(cfg);
    const SquidModel squid = squid_from_config(cfg);
    const SweepSpec spec = detail::sweep_with_override(cfg, opt);
    const SweepGrid grid =
        run_sweep(device, squid, spec.frequencies, spec.fluxes, spec.z0, opt.threads);
    std::ofstream out(out_path);
    if (!out) throw Error("cannot write '" + out_path + "'");
    write_sweep_csv(out, grid);
}

// fit: measured CSV (f_Hz, S21, S31 linear magnitudes, optional flux column)
// -> per-flux bare/effective L_coup table plus reconstructed chiN/pi curves.
inline void cmd_fit(const RunConfig& cfg, const std::string& data_path,
                    const std::string& out_path, std::ostream& summary) {
    check_known_keys(cfg, {{"device", device_keys()},
                           {"squid", squid_keys()},
                           {"fit", {"data_csv", "flux"}}});
    const DeviceParams device = device_from_config(cfg);

    const CsvTable table = read_csv_file(data_path);
    const int cf = table.column("f_Hz");
    const int c21 = table.column("S21");
    const int c31 = table.column("S31");
    int cflux = -1;
    for (std::size_t i = 0; i < table.header.size(); ++i)
        if (table.header[i] == "flux") cflux = static_cast<int>(i);
    const double default_flux = cfg.get_double_or("fit", "flux", 0.0);

    // group rows by flux, preserving frequency order within each group
    std::map<double, std::vector<std::array<double, 3>>> groups;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const double flux = cflux >= 0 ? csv_double(row[cflux], "flux", r) : default_flux;
        groups[flux].push_back({csv_double(row[cf], "f_Hz", r), csv_double(row[c21], "S21", r),
                                csv_double(row[c31], "S31", r)});
    }

    std::ofstream out(out_path);
    if (!out) throw Error("cannot write '" + out_path + "'");
    out << "flux,l_coup_nH,residual_rms_rad,covariance_H2\n";
    std::ofstream curves(detail::stem_plus(out_path, "_chi"));
    if (!curves) throw Error("cannot write chi curve file");
    curves << "flux,f_Hz,chi_n_data_over_pi,chi_n_fit_over_pi\n";

    for (const auto& [flux, rows] : groups) {
        std::vector<double> freqs, m21, m31;
        for (const auto& r : rows) {
            freqs.push_back(r[0]);
            m21.push_back(r[1]);
            m31.push_back(r[2]);
        }
        const ChiExtraction extraction = extract_chi(freqs, m21, m31);
        const FitResult fit = fit_lcoup(extraction, device.line_inductance,
                                        device.line_capacitance, device.n_units,
                                        device.squid_self_capacitance);
        out << format_sig9(flux) << ',' << format_sig9(fit.l_coup * 1e9) << ','
            << format_sig9(fit.residual_rms) << ',' << format_sig9(fit.covariance) << '\n';
        for (std::size_t i = 0; i < freqs.size(); ++i) {
            const double chi_fit =
                coupling_phase(2.0 * pi * freqs[i], device.line_inductance,
                               device.line_capacitance, fit.l_coup_star[i], device.n_units);
            curves << format_sig9(flux) << ',' << format_sig9(freqs[i]) << ','
                   << format_sig9(extraction.chi_n[i] / pi) << ',' << format_sig9(chi_fit / pi)
                   << '\n';
        }
        summary << "flux " << format_sig9(flux) << ": L_coup = " << format_sig9(fit.l_coup * 1e9)
                << " nH, rms = " << format_sig9(fit.residual_rms) << " rad\n";
    }
}

inline void cmd_design(const RunConfig& cfg, const CommonOptions& opt, std::ostream& out) {
    check_known_keys(cfg,
                     {{"squid", squid_keys()},
                      {"design", {"f_GHz", "z_ohm", "chi_n_over_pi", "n_units",
                                  "line_inductance_nH", "l_max_nH", "unit_pitch_um"}}});
    DesignSpec spec;
    spec.f_target = cfg.get_double("design", "f_GHz") * 1e9;
    spec.z_target = cfg.get_double("design", "z_ohm");
    spec.chi_n_target = cfg.get_double_or("design", "chi_n_over_pi", 0.5) * pi;
    spec.n_units = cfg.get_int("design", "n_units");
    if (cfg.has("design", "line_inductance_nH"))
        spec.line_inductance = cfg.get_double("design", "line_inductance_nH") * 1e-9;
    if (cfg.has("design", "l_max_nH")) spec.l_max = cfg.get_double("design", "l_max_nH") * 1e-9;
    if (cfg.has("design", "unit_pitch_um"))
        spec.unit_pitch = cfg.get_double("design", "unit_pitch_um") * 1e-6;

    const SynthesisResult synth = synthesize(spec);
    const SquidModel squid = squid_from_config(cfg);
    const double omega = 2.0 * pi * spec.f_target;
    const FluxBias flux = flux_for_lcoup(synth.l_coup, squid, omega);

    const double z0 = opt.z0_override
                          ? *opt.z0_override
                          : characteristic_impedance(synth.device.line_inductance,
                                                     synth.device.line_capacitance, synth.l_coup);
    // forward verification at the synthesized operating point
    const auto s = solve_device(synth.device, squid, spec.f_target, flux, z0);
    const double iso =
        20.0 * std::log10(std::abs(s.s(2, 0)) / std::max(std::abs(s.s(1, 0)), 1e-300));
    double f_lo = spec.f_target, f_hi = spec.f_target;
    const double step = spec.f_target / 500.0;
    auto iso_at = [&](double f) {
        const auto si = solve_device(synth.device, squid, f, flux, z0);
        return 20.0 * std::log10(std::abs(si.s(2, 0)) / std::max(std::abs(si.s(1, 0)), 1e-300));
    };
    for (int i = 0; i < 1000 && f_lo - step > 0 && iso_at(f_lo - step) >= 20.0; ++i) f_lo -= step;
    for (int i = 0; i < 1000 && iso_at(f_hi + step) >= 20.0; ++i) f_hi += step;

    out << "line_inductance_nH = " << format_sig9(synth.device.line_inductance * 1e9) << "\n"
        << "line_capacitance_fF = " << format_sig9(synth.device.line_capacitance * 1e15) << "\n"
        << "n_units = " << synth.device.n_units << "\n"
        << "l_coup_nH = " << format_sig9(synth.l_coup * 1e9) << "\n"
        << "flux = " << format_sig9(flux.normalized) << "\n"
        << "z_check_ohm = "
        << format_sig9(std::sqrt(synth.device.line_inductance / synth.device.line_capacitance))
        << "\n"
        << "verify_isolation_dB = " << format_sig9(std::min(iso, kIsolationCapDb)) << "\n"
        << "verify_bandwidth_GHz = " << format_sig9((f_hi - f_lo) / 1e9) << "\n";
}

inline void cmd_points(const std::string& sweep_csv_path, double threshold_db, std::ostream& out) {
    const MagnitudeGrid grid = magnitude_grid_from_csv(read_csv_file(sweep_csv_path));
    const auto points = find_operating_points(grid, threshold_db);
    out << "f_Hz,flux,state,isolation_dB,bandwidth_Hz,insertion_loss_dB\n";
    for (const auto& p : points) {
        out << format_sig9(p.frequency) << ',' << format_sig9(p.flux) << ','
            << (p.state == SwitchState::Through ? "through" : "cross") << ','
            << format_sig9(p.isolation_db) << ',' << format_sig9(p.bandwidth_hz) << ','
            << format_sig9(p.insertion_loss_db) << '\n';
    }
}

}  // namespace coswitch::cli
