#pragma once

// Exact frequency-domain solver for the N-cell coupled LC ladder as a
// four-port network. This is the independent oracle the continuum formulas
// are validated against.
//
// State vector at a cell boundary: (V_a, V_c, I_a, I_c), with the transfer
// matrix written in ABCD convention, left state = T * right state. Cascades
// multiply left to right, cells indexed 1..N.
//
// Time convention is e^{+j w t} (inductor impedance +jwL). The -pi/2 output
// phase difference of the cross channel relative to the through channel
// comes out of this convention directly; switching to e^{-j w t} would
// conjugate every S-parameter and flip it to +pi/2.

#include <array>
#include <cmath>
#include <complex>
#include <utility>

#include <Eigen/Dense>

#include "coswitch/core.hpp"
#include "coswitch/errors.hpp"
#include "coswitch/junction.hpp"

namespace coswitch {

using complexd = std::complex<double>;
using Matrix4c = Eigen::Matrix4cd;
using Matrix2c = Eigen::Matrix2cd;

struct TransferMatrix4 {
    Matrix4c m = Matrix4c::Identity();
};

struct FourPortSMatrix {
    Matrix4c s = Matrix4c::Zero();
    std::array<double, 4> z0{50.0, 50.0, 50.0, 50.0};
    double frequency = 0.0;  // Hz
    double flux = 0.0;       // Phi/Phi_0
};

// Per-unit series/shunt branches. The series branch couples the two lines
// through the mutual inductance; the shunt branch is the per-line capacitance.
struct UnitCellElements {
    Matrix2c z_series = Matrix2c::Zero();    // Ohm
    Matrix2c y_shunt = Matrix2c::Zero();     // S
    Matrix2c z_series_edge = Matrix2c::Zero();  // half line inductor, no SQUID
    bool capacitive_line = false;   // line inductor above self resonance
    bool capacitive_coupling = false;
};

inline UnitCellElements build_unit_cell(const DeviceParams& device, double coupling_l,
                                        double omega) {
    const auto report = validate_device(device);
    if (!report.passed()) throw NonPositiveInput("build_unit_cell: " + report.violations.front());
    if (!(omega > 0.0)) throw NonPositiveInput("build_unit_cell: omega must be positive");
    if (coupling_l < 0.0) throw NonPositiveInput("build_unit_cell: coupling inductance must be nonnegative");

    UnitCellElements cell;
    const complexd jw(0.0, omega);

    // Self capacitances shunt their own inductor, folding in as the
    // effective starred inductance of each element.
    double l_line = device.line_inductance;
    if (device.jj_self_capacitance > 0.0) {
        const auto eff = effective_inductance(l_line, device.jj_self_capacitance, omega);
        l_line = eff.effective;
        cell.capacitive_line = eff.capacitive;
    }
    double l_coup = coupling_l;
    if (coupling_l > 0.0 && device.squid_self_capacitance > 0.0) {
        const auto eff = effective_inductance(coupling_l, device.squid_self_capacitance, omega);
        l_coup = eff.effective;
        cell.capacitive_coupling = eff.capacitive;
    }

    cell.z_series(0, 0) = jw * (l_line + l_coup);
    cell.z_series(1, 1) = jw * (l_line + l_coup);
    cell.z_series(0, 1) = jw * l_coup;
    cell.z_series(1, 0) = jw * l_coup;

    cell.y_shunt(0, 0) = jw * device.line_capacitance;
    cell.y_shunt(1, 1) = jw * device.line_capacitance;

    cell.z_series_edge(0, 0) = jw * 0.5 * l_line;
    cell.z_series_edge(1, 1) = jw * 0.5 * l_line;
    return cell;
}

namespace detail {

inline Matrix4c series_matrix(const Matrix2c& z) {
    Matrix4c t = Matrix4c::Identity();
    t.block<2, 2>(0, 2) = z;
    return t;
}

inline Matrix4c shunt_matrix(const Matrix2c& y) {
    Matrix4c t = Matrix4c::Identity();
    t.block<2, 2>(2, 0) = y;
    return t;
}

}  // namespace detail

inline TransferMatrix4 cascade(const DeviceParams& device, double coupling_l, double omega) {
    const UnitCellElements cell = build_unit_cell(device, coupling_l, omega);
    const Matrix4c series = detail::series_matrix(cell.z_series);
    const Matrix4c shunt = detail::shunt_matrix(cell.y_shunt);

    TransferMatrix4 total;
    if (device.edge_style == EdgeStyle::Plain) {
        for (int i = 0; i < device.n_units; ++i) total.m = total.m * series * shunt;
        return total;
    }
    // Symmetrized edges: (half series)(shunt)[(series)(shunt)]^{N-1}(half series).
    const Matrix4c half = detail::series_matrix(cell.z_series_edge);
    total.m = half * shunt;
    for (int i = 0; i < device.n_units - 1; ++i) total.m = total.m * series * shunt;
    total.m = total.m * half;
    return total;
}

// ABCD -> S for the four-port. Ports (1, 4) are the left ends of lines
// (a, c); ports (2, 3) are the right ends. Wave amplitudes use
// a = (V + Z0 I_in)/(2 sqrt(Z0)), b = (V - Z0 I_in)/(2 sqrt(Z0)) with I_in
// flowing into the network at each port.
inline FourPortSMatrix to_s_parameters(const TransferMatrix4& t, const std::array<double, 4>& z0) {
    for (double z : z0) {
        if (!(z > 0.0)) throw NonPositiveInput("to_s_parameters: reference impedance must be positive");
    }
    // Unknowns x = right-boundary state (V_a, V_c, I_a, I_c); left state = T x.
    // Row p of A maps x to the incident wave at port p, row p of B to the
    // reflected wave; then S = B A^{-1}.
    Matrix4c a = Matrix4c::Zero();
    Matrix4c b = Matrix4c::Zero();
    const std::array<double, 4> root{std::sqrt(z0[0]), std::sqrt(z0[1]), std::sqrt(z0[2]),
                                     std::sqrt(z0[3])};
    // Port 1: line a left. Port 4: line c left.
    a.row(0) = (t.m.row(0) + z0[0] * t.m.row(2)) / (2.0 * root[0]);
    b.row(0) = (t.m.row(0) - z0[0] * t.m.row(2)) / (2.0 * root[0]);
    a.row(3) = (t.m.row(1) + z0[3] * t.m.row(3)) / (2.0 * root[3]);
    b.row(3) = (t.m.row(1) - z0[3] * t.m.row(3)) / (2.0 * root[3]);
    // Port 2: line a right. Port 3: line c right. Current into the network
    // at the right boundary is -I.
    Eigen::RowVector4cd va{1.0, 0.0, 0.0, 0.0}, vc{0.0, 1.0, 0.0, 0.0};
    Eigen::RowVector4cd ia{0.0, 0.0, 1.0, 0.0}, ic{0.0, 0.0, 0.0, 1.0};
    a.row(1) = (va - z0[1] * ia) / (2.0 * root[1]);
    b.row(1) = (va + z0[1] * ia) / (2.0 * root[1]);
    a.row(2) = (vc - z0[2] * ic) / (2.0 * root[2]);
    b.row(2) = (vc + z0[2] * ic) / (2.0 * root[2]);

    Eigen::FullPivLU<Matrix4c> lu(a);
    if (!lu.isInvertible())
        throw SingularConversion("to_s_parameters: wave mapping is singular at this frequency");
    FourPortSMatrix out;
    out.s = b * lu.inverse();
    out.z0 = z0;
    return out;
}

inline FourPortSMatrix to_s_parameters(const TransferMatrix4& t, double z0) {
    return to_s_parameters(t, std::array<double, 4>{z0, z0, z0, z0});
}

// Per-unit Bloch wavenumbers of the repeating (series)(shunt) cell, from the
// eigenvalues e^{+-jk} of its transfer matrix. Returns {k_minus, k_plus}
// sorted ascending, in rad/unit.
inline std::array<double, 2> cell_wavenumbers(const DeviceParams& device, double coupling_l,
                                              double omega) {
    const UnitCellElements cell = build_unit_cell(device, coupling_l, omega);
    const Matrix4c t = detail::series_matrix(cell.z_series) * detail::shunt_matrix(cell.y_shunt);
    Eigen::ComplexEigenSolver<Matrix4c> es(t);
    std::array<double, 2> ks{0.0, 0.0};
    int found = 0;
    for (int i = 0; i < 4 && found < 2; ++i) {
        const double k = std::arg(es.eigenvalues()[i]);
        if (k <= 0.0) continue;  // keep the forward branch of each mode pair
        ks[found++] = k;
    }
    if (found != 2)
        throw SingularConversion("cell_wavenumbers: cell is not propagating at this frequency");
    if (ks[0] > ks[1]) std::swap(ks[0], ks[1]);
    return ks;
}

inline FourPortSMatrix solve_device(const DeviceParams& device, const SquidModel& squid,
                                    double frequency_hz, FluxBias flux, double z0) {
    const double omega = 2.0 * pi * frequency_hz;
    const double l_coup = squid_inductance(squid, flux);
    auto s = to_s_parameters(cascade(device, l_coup, omega), z0);
    s.frequency = frequency_hz;
    s.flux = flux.normalized;
    return s;
}

}  // namespace coswitch
