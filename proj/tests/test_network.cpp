#include <doctest.h>

#include <cmath>
#include <complex>

#include "coswitch/continuum.hpp"
#include "coswitch/junction.hpp"
#include "coswitch/network.hpp"

using namespace coswitch;

namespace {

DeviceParams paper_device(EdgeStyle style = EdgeStyle::SymmetrizedEdges) {
    DeviceParams d;
    d.line_inductance = 0.28e-9;
    d.line_capacitance = 300e-15;
    d.n_units = 24;
    d.unit_pitch = 34e-6;
    d.edge_style = style;
    return d;
}

// L_coup solving chiN(target) at omega, closed form inversion.
double lcoup_for_phase(const DeviceParams& d, double omega, double chi_n) {
    const double slc = std::sqrt(d.line_inductance * d.line_capacitance);
    const double r = 1.0 + 2.0 * chi_n / (slc * omega * d.n_units);
    return 0.5 * d.line_inductance * (r * r - 1.0);
}

double max_abs(const Matrix4c& m) {
    double v = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) v = std::max(v, std::abs(m(i, j)));
    return v;
}

}  // namespace

TEST_CASE("unit cell decouples at zero coupling") {
    const auto cell = build_unit_cell(paper_device(), 0.0, 2 * pi * 6e9);
    CHECK(std::abs(cell.z_series(0, 1)) == 0.0);
    CHECK(std::abs(cell.z_series(1, 0)) == 0.0);
    CHECK(std::abs(cell.y_shunt(0, 1)) == 0.0);
    // purely reactive branches
    CHECK(cell.z_series(0, 0).real() == 0.0);
    CHECK(cell.y_shunt(0, 0).real() == 0.0);
}

TEST_CASE("cell eigen-wavenumbers match the continuum dispersion at low frequency") {
    const auto dev = paper_device();
    const double w = 2 * pi * 1e9;
    const double lcoup = 0.126e-9;
    const auto ks = cell_wavenumbers(dev, lcoup, w);
    const auto m = dispersion(w, dev.line_inductance, dev.line_capacitance, lcoup);
    CHECK(ks[0] == doctest::Approx(m.k_minus).epsilon(1e-3).scale(0.0));
    CHECK(ks[1] == doctest::Approx(m.k_plus).epsilon(1e-3).scale(0.0));
}

TEST_CASE("parasitic-laden cell equals the starred-inductance continuum at 6 GHz") {
    auto dev = paper_device();
    dev.jj_self_capacitance = 50e-15;
    dev.squid_self_capacitance = 30e-15;
    const double w = 2 * pi * 6e9;
    const double lcoup = 0.126e-9;
    const auto ks = cell_wavenumbers(dev, lcoup, w);

    auto clean = paper_device();
    const double l_star = effective_inductance(dev.line_inductance, 50e-15, w).effective;
    const double lcoup_star = effective_inductance(lcoup, 30e-15, w).effective;
    // folding the parasitics into starred inductances reproduces the same
    // lattice exactly
    clean.line_inductance = l_star;
    const auto ks_star = cell_wavenumbers(clean, lcoup_star, w);
    CHECK(ks[0] == doctest::Approx(ks_star[0]).epsilon(1e-12).scale(0.0));
    CHECK(ks[1] == doctest::Approx(ks_star[1]).epsilon(1e-12).scale(0.0));
    // the continuum with the same starred values sits within the ~(ka)^2/24
    // lattice discretization offset at 6 GHz
    const auto m = dispersion(w, l_star, dev.line_capacitance, lcoup_star);
    CHECK(ks[0] == doctest::Approx(m.k_minus).epsilon(1e-2).scale(0.0));
    CHECK(ks[1] == doctest::Approx(m.k_plus).epsilon(1e-2).scale(0.0));
}

TEST_CASE("transfer matrix is unimodular") {
    const auto t = cascade(paper_device(), 0.126e-9, 2 * pi * 6e9);
    CHECK(std::abs(std::abs(t.m.determinant()) - 1.0) < 1e-9);
}

TEST_CASE("plain cascade is the matrix power of one cell") {
    auto dev1 = paper_device(EdgeStyle::Plain);
    dev1.n_units = 1;
    auto dev2 = paper_device(EdgeStyle::Plain);
    dev2.n_units = 2;
    const double w = 2 * pi * 6e9;
    const auto t1 = cascade(dev1, 0.126e-9, w);
    const auto t2 = cascade(dev2, 0.126e-9, w);
    CHECK(max_abs(t2.m - t1.m * t1.m) / max_abs(t2.m) < 1e-12);
}

TEST_CASE("symmetrized chain is palindromic") {
    // reversing the cell order of the symmetrized chain reproduces the same
    // total matrix; equivalent statement: the chain equals its own reversal,
    // checked through the mirror device (identical here by construction).
    const auto dev = paper_device();
    const double w = 2 * pi * 6e9;
    const auto cell = build_unit_cell(dev, 0.126e-9, w);
    Matrix4c series = Matrix4c::Identity();
    series.block<2, 2>(0, 2) = cell.z_series;
    Matrix4c shunt = Matrix4c::Identity();
    shunt.block<2, 2>(2, 0) = cell.y_shunt;
    Matrix4c half = Matrix4c::Identity();
    half.block<2, 2>(0, 2) = cell.z_series_edge;

    Matrix4c forward = half * shunt;
    for (int i = 0; i < dev.n_units - 1; ++i) forward = forward * series * shunt;
    forward = forward * half;
    Matrix4c reversed = half;
    for (int i = 0; i < dev.n_units - 1; ++i) reversed = reversed * shunt * series;
    reversed = reversed * shunt * half;
    CHECK(max_abs(forward - reversed) / max_abs(forward) < 1e-12);
    CHECK(max_abs(forward - cascade(dev, 0.126e-9, w).m) / max_abs(forward) < 1e-14);
}

TEST_CASE("identity network is a pass-through") {
    const auto s = to_s_parameters(TransferMatrix4{}, 30.55);
    CHECK(std::abs(s.s(1, 0)) == doctest::Approx(1.0).epsilon(1e-12).scale(0.0));
    CHECK(std::abs(s.s(0, 1)) == doctest::Approx(1.0).epsilon(1e-12).scale(0.0));
    CHECK(std::abs(s.s(2, 3)) == doctest::Approx(1.0).epsilon(1e-12).scale(0.0));
    CHECK(std::abs(s.s(0, 0)) < 1e-12);
    CHECK(std::abs(s.s(2, 0)) < 1e-12);
    CHECK(std::abs(s.s(3, 0)) < 1e-12);
}

TEST_CASE("decoupled lines cannot transfer power") {
    const auto dev = paper_device();
    const auto s = to_s_parameters(cascade(dev, 0.0, 2 * pi * 6e9), 36.0);
    CHECK(std::abs(s.s(2, 0)) < 1e-12);
    CHECK(std::abs(s.s(3, 0)) < 1e-12);
}

TEST_CASE("quarter-period coupling routes the signal to port 3") {
    const auto dev = paper_device();
    const double w = 2 * pi * 6e9;
    const double lcoup = lcoup_for_phase(dev, w, pi / 2.0);
    const double z0 =
        characteristic_impedance(dev.line_inductance, dev.line_capacitance, lcoup);
    const auto s = to_s_parameters(cascade(dev, lcoup, w), z0);
    CHECK(std::norm(s.s(2, 0)) >= 0.95);
    CHECK(std::norm(s.s(1, 0)) <= 0.02);
}

TEST_CASE("solve_device flux symmetries") {
    const auto dev = paper_device();
    SquidModel squid{11.75e-6, 0.02, 0.0};
    const auto s0 = solve_device(dev, squid, 6e9, FluxBias{0.3}, 50.0);
    const auto s1 = solve_device(dev, squid, 6e9, FluxBias{1.3}, 50.0);
    const auto s2 = solve_device(dev, squid, 6e9, FluxBias{-0.3}, 50.0);
    CHECK(max_abs(s0.s - s1.s) < 1e-12);
    CHECK(max_abs(s0.s - s2.s) < 1e-12);
}

TEST_CASE("solve_device propagates the flux singularity") {
    const auto dev = paper_device();
    SquidModel squid{11.75e-6, 0.0, 0.0};
    CHECK_THROWS_AS(solve_device(dev, squid, 6e9, FluxBias{0.5}, 50.0), FluxSingularity);
}

TEST_CASE("S-matrix property grid: unitarity, reciprocity, mirror symmetry") {
    const auto dev = paper_device();
    SquidModel squid{11.75e-6, 0.02, 0.0};
    Eigen::Matrix4i mirror;  // port swap 1<->4, 2<->3
    mirror << 0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0;
    const Matrix4c p = mirror.cast<complexd>();
    double worst_unitarity = 0.0, worst_reciprocity = 0.0, worst_mirror = 0.0;
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 20; ++j) {
            const double f = 4e9 + 4e9 * i / 19.0;
            const double phi = 0.0 + 0.5 * j / 19.0;
            const auto s = solve_device(dev, squid, f, FluxBias{phi}, 50.0);
            worst_unitarity = std::max(
                worst_unitarity, max_abs(s.s.adjoint() * s.s - Matrix4c::Identity()));
            worst_reciprocity = std::max(worst_reciprocity, max_abs(s.s - s.s.transpose()));
            worst_mirror = std::max(worst_mirror, max_abs(s.s - p * s.s * p));
        }
    }
    CHECK(worst_unitarity < 1e-9);
    CHECK(worst_reciprocity < 1e-10);
    CHECK(worst_mirror < 1e-10);
}

TEST_CASE("lossless unitarity row sum") {
    const auto dev = paper_device();
    SquidModel squid{11.75e-6, 0.02, 0.0};
    const auto s = solve_device(dev, squid, 6e9, FluxBias{0.45}, 50.0);
    const double total = std::norm(s.s(0, 0)) + std::norm(s.s(1, 0)) + std::norm(s.s(2, 0)) +
                         std::norm(s.s(3, 0));
    CHECK(std::abs(total - 1.0) < 1e-9);
}

TEST_CASE("zero-frequency limit: inductors short, capacitors open") {
    const auto dev = paper_device();
    SquidModel squid{11.75e-6, 0.02, 0.0};
    const auto s = solve_device(dev, squid, 1e3, FluxBias{0.45}, 50.0);
    CHECK(std::abs(s.s(1, 0)) == doctest::Approx(1.0).epsilon(1e-6).scale(0.0));
    CHECK(std::abs(s.s(2, 0)) < 1e-6);
}

TEST_CASE("discrete solver converges to the envelope power law") {
    // chiN = pi/2 held fixed while N grows, L_coup rescaled each time. The
    // comparison envelope phase comes from the lattice Bloch wavenumbers of
    // the repeating cell ((N-1) coupled units in the symmetrized chain); the
    // continuum chi overshoots by the fixed per-unit discretization error and
    // cannot converge over a band at fixed frequency.
    const double w6 = 2 * pi * 6e9;
    double prev = 1e9;
    std::vector<double> devs;
    for (int n : {24, 48, 96, 192}) {
        auto dev = paper_device();
        dev.n_units = n;
        const double lcoup = lcoup_for_phase(dev, w6, pi / 2.0);
        const double z0 =
            characteristic_impedance(dev.line_inductance, dev.line_capacitance, lcoup);
        double maxdev = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double f = 4.8e9 + (7.3e9 - 4.8e9) * i / 100.0;
            const double w = 2 * pi * f;
            const auto s = to_s_parameters(cascade(dev, lcoup, w), z0);
            const auto ks = cell_wavenumbers(dev, lcoup, w);
            const double chi_n = (n - 1) * 0.5 * (ks[1] - ks[0]);
            maxdev = std::max(maxdev,
                              std::abs(std::norm(s.s(2, 0)) - std::pow(std::sin(chi_n), 2)));
        }
        CHECK(maxdev < prev);
        prev = maxdev;
        devs.push_back(maxdev);
    }
    CHECK(devs.back() < 0.005);
}

TEST_CASE("output phase difference is -90 degrees over the working flux range") {
    const auto dev = paper_device();
    SquidModel squid{11.75e-6, 0.005, 0.0};
    const double lcoup = lcoup_for_phase(dev, 2 * pi * 6e9, pi / 2.0);
    const double z0 = characteristic_impedance(dev.line_inductance, dev.line_capacitance, lcoup);
    for (double phi = 0.40; phi <= 0.4951; phi += 0.005) {
        const auto s = solve_device(dev, squid, 6e9, FluxBias{phi}, z0);
        double diff = (std::arg(s.s(2, 0)) - std::arg(s.s(1, 0))) * 180.0 / pi;
        while (diff > 180.0) diff -= 360.0;
        while (diff < -180.0) diff += 360.0;
        CHECK(std::abs(diff - (-90.0)) < 10.0);
    }
}
