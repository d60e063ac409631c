#include <doctest.h>

#include <cmath>

#include "coswitch/core.hpp"
#include "coswitch/junction.hpp"

using namespace coswitch;

TEST_CASE("jj_inductance reproduces the 0.28 nH line junction") {
    // 1.175 uA is the critical current that inverts L = Phi0/(2 pi Ic) at 0.28 nH
    CHECK(jj_inductance(1.175e-6) == doctest::Approx(0.280e-9).epsilon(1e-3).scale(0.0));
}

TEST_CASE("jj_inductance is inversely proportional to Ic") {
    const double l1 = jj_inductance(2.3e-6);
    const double l2 = jj_inductance(4.6e-6);
    CHECK(l1 == doctest::Approx(2.0 * l2).epsilon(1e-15).scale(0.0));
}

TEST_CASE("jj_inductance identity point") {
    const double ic = constants.flux_quantum / (2.0 * pi * 1.0);
    CHECK(jj_inductance(ic) == doctest::Approx(1.0).epsilon(1e-15).scale(0.0));
}

TEST_CASE("jj_inductance rejects nonpositive current") {
    CHECK_THROWS_AS(jj_inductance(0.0), NonPositiveCurrent);
    CHECK_THROWS_AS(jj_inductance(-1e-6), NonPositiveCurrent);
}

TEST_CASE("ambegaokar_baratoff_ic hand-checked value") {
    // pi * 200e-6 / (2 * 267) = 1.1766e-6
    CHECK(ambegaokar_baratoff_ic(267.0, 200e-6) == doctest::Approx(1.176e-6).epsilon(1e-3).scale(0.0));
}

TEST_CASE("ambegaokar_baratoff_ic scaling and identity") {
    CHECK(ambegaokar_baratoff_ic(534.0, 200e-6) ==
          doctest::Approx(0.5 * ambegaokar_baratoff_ic(267.0, 200e-6)).epsilon(1e-15).scale(0.0));
    CHECK(ambegaokar_baratoff_ic(pi / 2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15).scale(0.0));
    CHECK_THROWS_AS(ambegaokar_baratoff_ic(0.0, 200e-6), NonPositiveInput);
    CHECK_THROWS_AS(ambegaokar_baratoff_ic(267.0, -1.0), NonPositiveInput);
}

TEST_CASE("squid_inductance at zero flux") {
    SquidModel squid{11.75e-6, 0.0, 0.0};
    const double expected = constants.flux_quantum / (4.0 * pi * squid.junction_critical_current);
    CHECK(squid_inductance(squid, FluxBias{0.0}) == doctest::Approx(expected).epsilon(1e-15).scale(0.0));
}

TEST_CASE("squid_inductance pole at half flux with zero asymmetry") {
    SquidModel squid{11.75e-6, 0.0, 0.0};
    CHECK_THROWS_AS(squid_inductance(squid, FluxBias{0.5}), FluxSingularity);
    CHECK_THROWS_AS(squid_inductance(squid, FluxBias{0.7}), FluxSingularity);
}

TEST_CASE("squid_inductance at one third flux quantum") {
    // cos(pi/3) = 0.5, so the value rises by 1/sqrt(0.5)
    SquidModel squid{11.75e-6, 0.0, 0.0};
    const double l0 = squid_inductance(squid, FluxBias{0.0});
    CHECK(squid_inductance(squid, FluxBias{1.0 / 3.0}) ==
          doctest::Approx(l0 * std::sqrt(2.0)).epsilon(1e-12).scale(0.0));
}

TEST_CASE("squid_inductance is even and 1-periodic in flux") {
    SquidModel squid{11.75e-6, 0.02, 0.0};
    for (int i = 0; i <= 200; ++i) {
        const double phi = -1.0 + 2.0 * i / 200.0;
        const double l = squid_inductance(squid, FluxBias{phi});
        CHECK(std::abs(l - squid_inductance(squid, FluxBias{-phi})) / l < 1e-15);
        CHECK(std::abs(l - squid_inductance(squid, FluxBias{phi + 1.0})) / l < 1e-14);
    }
}

TEST_CASE("squid_inductance monotone on [0, 0.5) at zero asymmetry") {
    SquidModel squid{11.75e-6, 0.0, 0.0};
    double prev = squid_inductance(squid, FluxBias{0.0});
    for (int i = 1; i < 50; ++i) {
        const double cur = squid_inductance(squid, FluxBias{0.4999 * i / 49.0});
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("asymmetry caps the squid inductance at half flux") {
    const double d = 0.1;
    SquidModel squid{11.75e-6, d, 0.0};
    const double at_half = squid_inductance(squid, FluxBias{0.5});
    const double expected =
        constants.flux_quantum / (4.0 * pi * squid.junction_critical_current * std::sqrt(d));
    CHECK(at_half == doctest::Approx(expected).epsilon(1e-12).scale(0.0));
    double max_seen = 0.0;
    for (int i = 0; i <= 1000; ++i)
        max_seen = std::max(max_seen, squid_inductance(squid, FluxBias{i / 1000.0}));
    CHECK(max_seen <= at_half * (1.0 + 1e-12));
}

TEST_CASE("effective_inductance basics") {
    CHECK(effective_inductance(0.28e-9, 0.0, 2 * pi * 6e9).effective ==
          doctest::Approx(0.28e-9).epsilon(1e-15).scale(0.0));
    // 1/(1/0.28nH - w^2 * 50 fF) at 6 GHz
    const auto eff = effective_inductance(0.28e-9, 50e-15, 2 * pi * 6e9);
    CHECK(eff.effective == doctest::Approx(0.2858e-9).epsilon(1e-3).scale(0.0));
    CHECK_FALSE(eff.capacitive);
}

TEST_CASE("effective_inductance at the self-resonance pole") {
    const double l = 0.28e-9, c = 50e-15;
    CHECK_THROWS_AS(effective_inductance(l, c, 1.0 / std::sqrt(l * c)), SelfResonance);
}

TEST_CASE("effective_inductance above resonance flags the capacitive regime") {
    const double l = 0.28e-9, c = 50e-15;
    const auto eff = effective_inductance(l, c, 1.5 / std::sqrt(l * c));
    CHECK(eff.capacitive);
    CHECK(eff.effective < 0.0);
}

TEST_CASE("effective_inductance tends to L at low frequency") {
    const auto eff = effective_inductance(0.28e-9, 50e-15, 1.0);
    CHECK(std::abs(eff.effective - 0.28e-9) / 0.28e-9 < 1e-9);
}

TEST_CASE("linear_power_limit heuristic value") {
    JunctionSpec jj{1.175e-6, 0.0};
    const double p = linear_power_limit(jj, 30.0, 1.0);
    CHECK(p == doctest::Approx(2.07e-11).epsilon(1e-2).scale(0.0));
    // lands between the measured -80 dBm linear threshold and -65 dBm breakdown
    CHECK(watts_to_dbm(p) > -80.0);
    CHECK(watts_to_dbm(p) < -65.0);
}

TEST_CASE("linear_power_limit quadratic scalings") {
    JunctionSpec jj{1.175e-6, 0.0};
    CHECK(linear_power_limit(jj, 30.0, 0.5) ==
          doctest::Approx(0.25 * linear_power_limit(jj, 30.0, 1.0)).epsilon(1e-15).scale(0.0));
    JunctionSpec big{10.0 * jj.critical_current, 0.0};
    CHECK(linear_power_limit(big, 30.0, 1.0) ==
          doctest::Approx(100.0 * linear_power_limit(jj, 30.0, 1.0)).epsilon(1e-12).scale(0.0));
    CHECK_THROWS_AS(linear_power_limit(jj, 30.0, 0.0), NonPositiveInput);
    CHECK_THROWS_AS(linear_power_limit(jj, -30.0, 1.0), NonPositiveInput);
}

TEST_CASE("photon_flux reference points") {
    // 10 pW at 6 GHz is 2.5e6 photons per microsecond
    const double flux = photon_flux(10e-12, 6e9);
    CHECK(flux * 1e-6 == doctest::Approx(2.5e6).epsilon(0.02).scale(0.0));
    CHECK(photon_flux(0.0, 6e9) == 0.0);
    CHECK(photon_flux(constants.planck_h * 4.2e9 * 1e6, 4.2e9) ==
          doctest::Approx(1e6).epsilon(1e-12).scale(0.0));
}
