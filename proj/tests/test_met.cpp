#include <doctest.h>

#include <cmath>

#include "finmet/constants.hpp"
#include "finmet/errors.hpp"
#include "finmet/met.hpp"

using namespace finmet;
using phys::planck_h;

namespace {

// reference junction: 8 nm Si barrier, low barrier height
JunctionSpec base_spec() { return JunctionSpec{}; }

JunctionSpec spec_with_rn(double rn_target) {
    JunctionSpec s = base_spec();
    const double kappa = wkb_kappa(s.barrier_height_ev, s.effective_mass_ratio);
    s.r0 = rn_target * s.area * std::exp(-2.0 * kappa * s.barrier_thickness);
    return s;
}

}  // namespace

TEST_SUITE("met") {

TEST_CASE("junction capacitance: parallel plate") {
    JunctionSpec s = base_spec();
    s.area = 1e-10;  // (10 um)^2
    const double c = junction_capacitance(s);
    CHECK(c == doctest::Approx(1.295e-12).epsilon(1e-3));
    CHECK(c == doctest::Approx(phys::eps0 * 11.7 * 1e-10 / 8e-9).epsilon(1e-15));

    JunctionSpec s2 = s;
    s2.area = 2.0 * s.area;
    CHECK(junction_capacitance(s2) == 2.0 * c);  // exact linearity
    JunctionSpec s3 = s;
    s3.barrier_thickness = 2.0 * s.barrier_thickness;
    CHECK(junction_capacitance(s3) == 0.5 * c);  // exact scaling
}

TEST_CASE("charging energy") {
    CHECK(charging_energy(100e-15) / planck_h == doctest::Approx(193.7e6).epsilon(1e-3));
    const double c = phys::eps0 * 11.7 * 1e-10 / 8e-9;
    CHECK(charging_energy(c) / planck_h == doctest::Approx(14.96e6).epsilon(1e-3));
    CHECK(charging_energy(2.0 * 100e-15) == 0.5 * charging_energy(100e-15));
    CHECK_THROWS_AS(charging_energy(0.0), domain_error);
}

TEST_CASE("wkb decay constant") {
    CHECK(wkb_kappa(0.2, 1.0) == doctest::Approx(2.291e9).epsilon(1e-3));
    CHECK(wkb_kappa(2.0, 1.0) == doctest::Approx(7.245e9).epsilon(1e-3));
    CHECK(wkb_kappa(2.0, 1.0) / wkb_kappa(0.2, 1.0) ==
          doctest::Approx(std::sqrt(10.0)).epsilon(1e-12));
    CHECK(wkb_kappa(0.8, 1.0) == doctest::Approx(2.0 * wkb_kappa(0.2, 1.0)).epsilon(1e-15));
    CHECK_THROWS_AS(wkb_kappa(0.0, 1.0), domain_error);
}

TEST_CASE("normal resistance: exponential thickness law") {
    JunctionSpec s = base_spec();
    const double rn = normal_resistance(s);
    JunctionSpec s2 = s;
    s2.barrier_thickness = s.barrier_thickness + 0.1e-9;
    CHECK(normal_resistance(s2) / rn == doctest::Approx(1.581).epsilon(1e-3));
    const double kappa = wkb_kappa(s.barrier_height_ev, s.effective_mass_ratio);
    CHECK(normal_resistance(s2) / rn ==
          doctest::Approx(std::exp(2.0 * kappa * 0.1e-9)).epsilon(1e-12));

    JunctionSpec s3 = s;
    s3.area = 2.0 * s.area;
    CHECK(normal_resistance(s3) == 0.5 * rn);

    JunctionSpec overflow = s;
    overflow.barrier_height_ev = 2.0;
    overflow.barrier_thickness = 100e-9;  // 2 kappa d > 700
    CHECK_THROWS_AS(normal_resistance(overflow), domain_error);
}

TEST_CASE("critical current: Ambegaokar-Baratoff at 6 kohm") {
    JunctionSpec s = spec_with_rn(6000.0);
    s.gap_ev = 180e-6;
    s.temperature = 0.0;
    const double ic = critical_current(s);
    CHECK(ic == doctest::Approx(47.1e-9).epsilon(1e-3));
    const double gap_j = 180e-6 * phys::ev_to_joule;
    CHECK(ic == doctest::Approx(std::numbers::pi * gap_j /
                                (2.0 * phys::elem_charge * 6000.0))
                    .epsilon(1e-9));

    // 10 mK is indistinguishable from T = 0 in double precision
    JunctionSpec cold = s;
    cold.temperature = 0.01;
    CHECK(critical_current(cold) == ic);

    JunctionSpec doubled = s;
    doubled.r0 = 2.0 * s.r0;  // doubles R_n
    CHECK(critical_current(doubled) == doctest::Approx(0.5 * ic).epsilon(1e-15));
}

TEST_CASE("josephson energy") {
    const double ic = 47.1239e-9;
    const double ej = josephson_energy(ic);
    CHECK(ej / planck_h == doctest::Approx(23.4e9).epsilon(1e-3));
    CHECK(ej == doctest::Approx(phys::hbar * ic / (2.0 * phys::elem_charge)).epsilon(1e-15));
    CHECK(josephson_energy(2.0 * ic) == 2.0 * ej);
    CHECK_THROWS_AS(josephson_energy(0.0), domain_error);
    CHECK_THROWS_AS(josephson_energy(-1e-9), domain_error);
}

TEST_CASE("transmon spectrum at E_J/E_C = 50") {
    const double e_j = planck_h * 12.5e9;
    const double e_c = planck_h * 0.25e9;
    const auto ev = transmon_spectrum(e_j, e_c, 0.0, 20);
    const double f01 = (ev[1] - ev[0]) / planck_h;
    // frozen from an independent dense diagonalization of the same matrix
    CHECK(f01 == doctest::Approx(4.7354797311e9).epsilon(1e-9));
    CHECK(f01 == doctest::Approx(4.75e9).epsilon(0.02));
    const double anharm = (ev[2] - 2.0 * ev[1] + ev[0]) / planck_h;
    CHECK(anharm < 0.0);
    CHECK(anharm == doctest::Approx(-287.3057573e6).epsilon(1e-9));
}

TEST_CASE("diagonalized anharmonicity approaches -E_C as the ratio grows") {
    const double e_c = planck_h * 0.25e9;
    double prev_dev = 1.0;
    for (double ratio : {50.0, 100.0, 200.0}) {
        const auto ev = transmon_spectrum(ratio * e_c, e_c, 0.0, 25);
        const double anharm = (ev[2] - 2.0 * ev[1] + ev[0]) / planck_h;
        CHECK(anharm < 0.0);
        const double dev = std::abs(anharm + 0.25e9) / 0.25e9;
        CHECK(dev < prev_dev);
        prev_dev = dev;
    }
    CHECK(prev_dev < 0.08);  // within 8% of -E_C/h by E_J/E_C = 200
}

TEST_CASE("transmon spectrum: charge-state limit at E_J -> 0") {
    const double e_c = planck_h * 0.25e9;
    const double e_j = 1e-9 * e_c;
    const auto ev = transmon_spectrum(e_j, e_c, 0.0, 15);
    CHECK(std::abs(ev[0]) < 1e-6 * e_c);
    CHECK((ev[1] - ev[0]) / (4.0 * e_c) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK((ev[2] - ev[0]) / (4.0 * e_c) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK((ev[3] - ev[0]) / (16.0 * e_c) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("transmon spectrum: integer offset-charge translation symmetry") {
    const double e_j = planck_h * 12.5e9;
    const double e_c = planck_h * 0.25e9;
    const auto a = transmon_spectrum(e_j, e_c, 0.3, 20);
    const auto b = transmon_spectrum(e_j, e_c, 1.3, 20);
    for (int k = 0; k < 5; ++k) {
        CHECK(std::abs(a[k] - b[k]) / std::max(std::abs(a[k]), e_c) < 1e-12);
    }
}

TEST_CASE("transmon spectrum: cutoff rules") {
    const double e_j = planck_h * 12.5e9;
    const double e_c = planck_h * 0.25e9;
    CHECK_THROWS_AS(transmon_spectrum(e_j, e_c, 0.0, 10), domain_error);
    // doubling the cutoff moves the lowest levels by < 1e-10 relative
    for (double ratio : {20.0, 50.0, 100.0}) {
        const auto a = transmon_spectrum(planck_h * ratio * 0.25e9, e_c, 0.0, 15);
        const auto b = transmon_spectrum(planck_h * ratio * 0.25e9, e_c, 0.0, 30);
        for (int k = 0; k < 3; ++k) {
            CHECK(std::abs(a[k] - b[k]) / std::max(std::abs(b[k]), e_c) < 1e-10);
        }
    }
}

TEST_CASE("asymptotic parameters") {
    const double e_j = planck_h * 12.5e9;
    const double e_c = planck_h * 0.25e9;
    const TransmonParams p = asymptotic_params(e_j, e_c);
    CHECK(p.f01 == doctest::Approx(4.75e9).epsilon(1e-12));
    CHECK(p.anharmonicity == doctest::Approx(-0.25e9).epsilon(1e-12));
    CHECK(p.transmon_regime);
    CHECK_THROWS_AS(asymptotic_params(planck_h * 2.5e9, e_c), domain_error);  // ratio 10
}

TEST_CASE("asymptotic f01 approaches the diagonalized value as the ratio grows") {
    const double e_c = planck_h * 0.25e9;
    double prev_err = 1.0;
    for (double ratio : {20.0, 35.0, 50.0, 75.0, 100.0}) {
        const double e_j = ratio * e_c;
        const auto ev = transmon_spectrum(e_j, e_c, 0.0, 25);
        const double diag = (ev[1] - ev[0]) / planck_h;
        const double asym = asymptotic_params(e_j, e_c).f01;
        const double err = std::abs(asym - diag) / diag;
        CHECK(err < prev_err);
        prev_err = err;
    }
}

TEST_CASE("charge dispersion: asymptotic formula vs diagonalization") {
    const double e_c = planck_h * 0.25e9;
    double prev = 1e99;
    for (double ratio : {30.0, 50.0, 70.0}) {
        const double e_j = ratio * e_c;
        const auto ev0 = transmon_spectrum(e_j, e_c, 0.0, 25);
        const auto evh = transmon_spectrum(e_j, e_c, 0.5, 25);
        const double diag =
            std::abs((evh[1] - evh[0]) - (ev0[1] - ev0[0])) / planck_h;
        CHECK(diag < prev);  // monotone decreasing in E_J/E_C
        prev = diag;
        if (ratio == 50.0) {
            const double asym = asymptotic_params(e_j, e_c).charge_dispersion_01;
            CHECK(asym / diag > 0.5);
            CHECK(asym / diag < 2.0);
        }
    }
}

TEST_CASE("design chain sits in the transmon regime by default") {
    const TransmonParams p = design_params(base_spec());
    CHECK(p.transmon_regime);
    CHECK(p.ratio > 50.0);
    CHECK(p.f01 == doctest::Approx(4.75e9).epsilon(0.02));
    CHECK(p.anharmonicity < 0.0);
}

TEST_CASE("area sensitivity: finite difference matches E_C/(h f01)") {
    const JunctionSpec s = base_spec();
    const TransmonParams p = design_params(s);
    const double expected = p.e_c / (planck_h * p.f01);
    CHECK(std::abs(area_sensitivity(s) - expected) < 1e-4);
    // the design-point arithmetic: E_C/h = 250 MHz, f01 = 4.75 GHz
    CHECK(0.25e9 / 4.75e9 == doctest::Approx(0.0526).epsilon(1e-2));
}

TEST_CASE("sqrt(E_J E_C) is exactly area invariant") {
    const JunctionSpec s = base_spec();
    const double base = std::sqrt(josephson_energy(critical_current(s)) *
                                  charging_energy(junction_capacitance(s)));
    for (double lambda : {0.5, 2.0, 10.0}) {
        JunctionSpec scaled = s;
        scaled.area = lambda * s.area;
        const double v = std::sqrt(josephson_energy(critical_current(scaled)) *
                                   charging_energy(junction_capacitance(scaled)));
        CHECK(std::abs(v - base) / base < 1e-12);
    }
    // sensitivity vanishes as E_C/f01 -> 0 (big junctions)
    JunctionSpec big = s;
    big.area = 100.0 * s.area;
    CHECK(area_sensitivity(big) < area_sensitivity(s));
}

TEST_CASE("frequency spread: Monte Carlo matches the analytic linearization") {
    const JunctionSpec s = base_spec();
    const double sigma_d = s.barrier_thickness / 100.0;
    const SpreadReport r = frequency_spread(s, sigma_d, 10000, 42);
    CHECK(r.analytic_rel_spread ==
          doctest::Approx(wkb_kappa(0.2, 1.0) * sigma_d).epsilon(1e-12));
    CHECK(r.rel_spread == doctest::Approx(r.analytic_rel_spread).epsilon(0.10));
    CHECK_FALSE(r.truncation_warning);

    // lognormal consistency: mean of ln I_c equals ln I_c(d) within 3 sigma
    const double expected_ln = std::log(critical_current(s));
    const double se = 2.0 * r.kappa * sigma_d / std::sqrt(10000.0);
    CHECK(std::abs(r.mean_ln_ic - expected_ln) < 3.0 * se);
}

TEST_CASE("frequency spread: degenerate and deterministic") {
    const JunctionSpec s = base_spec();
    const SpreadReport zero = frequency_spread(s, 0.0, 1000, 7);
    CHECK(zero.sigma_f01 == 0.0);
    CHECK(zero.rel_spread == 0.0);

    const SpreadReport a = frequency_spread(s, 0.05e-9, 2000, 11, 1);
    const SpreadReport b = frequency_spread(s, 0.05e-9, 2000, 11, 1);
    const SpreadReport c = frequency_spread(s, 0.05e-9, 2000, 11, 3);  // worker count
    CHECK(a.mean_f01 == b.mean_f01);
    CHECK(a.sigma_f01 == b.sigma_f01);
    CHECK(a.mean_f01 == c.mean_f01);
    CHECK(a.sigma_f01 == c.sigma_f01);
    for (int q = 0; q < 5; ++q) CHECK(a.quantiles[q] == c.quantiles[q]);

    CHECK_THROWS_AS(frequency_spread(s, 0.01e-9, 500, 1), domain_error);
    CHECK(frequency_spread(s, s.barrier_thickness / 2.0, 1000, 1).truncation_warning);
}

TEST_CASE("barrier comparison: thick low barrier wins by sqrt(10)") {
    const JunctionSpec si = base_spec();
    JunctionSpec alox = si;
    alox.barrier_height_ev = 2.0;
    // keep the reference barrier at the same R_n operating point
    alox.r0 = si.r0 * std::exp(2.0 *
                               (wkb_kappa(si.barrier_height_ev, 1.0) - wkb_kappa(2.0, 1.0)) *
                               si.barrier_thickness);

    const BarrierComparison cmp = compare_barriers(si, alox, 0.01e-9, 10000, 3);
    CHECK(cmp.analytic_ratio == doctest::Approx(std::sqrt(10.0)).epsilon(1e-12));
    CHECK(cmp.mc_ratio == doctest::Approx(std::sqrt(10.0)).epsilon(0.15));

    // first-order invariance under the noise scale
    const BarrierComparison c5 = compare_barriers(si, alox, 0.05e-9, 10000, 3);
    const BarrierComparison c10 = compare_barriers(si, alox, 0.10e-9, 10000, 3);
    CHECK(c10.mc_ratio == doctest::Approx(c5.mc_ratio).epsilon(0.15));

    const BarrierComparison same = compare_barriers(si, si, 0.05e-9, 5000, 3);
    CHECK(same.analytic_ratio == 1.0);
    CHECK(same.mc_ratio == 1.0);  // identical streams
}

TEST_CASE("junction spec validation") {
    JunctionSpec s = base_spec();
    s.effective_mass_ratio = 2.5;
    CHECK_THROWS_AS(s.validate(), domain_error);
    s = base_spec();
    s.barrier_thickness = 0.0;
    CHECK_THROWS_AS(s.validate(), domain_error);
    s = base_spec();
    s.temperature = -1.0;
    CHECK_THROWS_AS(s.validate(), domain_error);
}

}  // TEST_SUITE
