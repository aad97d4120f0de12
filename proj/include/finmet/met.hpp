#ifndef FINMET_MET_HPP
#define FINMET_MET_HPP

#include <array>
#include <cstdint>
#include <vector>

namespace finmet {

// Everything needed for E_J and E_C of a merged-element junction. The
// rectangular-barrier WKB exponent sets relative thickness scaling; the
// absolute resistance scale is anchored by the calibration prefactor r_0.
struct JunctionSpec {
    double barrier_thickness = 8e-9;    // m
    double barrier_height_ev = 0.2;     // eV
    double effective_mass_ratio = 1.0;  // m*/m_e
    double area = 6e-12;                // m^2
    double barrier_eps_r = 11.7;
    double gap_ev = 180e-6;             // superconducting gap, eV
    double r0 = 8.0e-24;                // ohm m^2
    double temperature = 0.0;           // K

    void validate() const;
};

struct TransmonParams {
    double e_j = 0.0;  // joules
    double e_c = 0.0;  // joules
    double f01 = 0.0;             // Hz
    double anharmonicity = 0.0;   // Hz, negative
    double charge_dispersion_01 = 0.0;  // Hz
    double ratio = 0.0;           // E_J/E_C
    bool transmon_regime = false;  // E_J/E_C >= 50
};

struct SpreadReport {
    double sigma_d = 0.0;  // m
    int samples = 0;
    std::uint64_t seed = 0;
    double mean_f01 = 0.0;
    double sigma_f01 = 0.0;
    double rel_spread = 0.0;           // empirical sigma_f/mean_f
    double analytic_rel_spread = 0.0;  // kappa * sigma_d
    double kappa = 0.0;                // 1/m
    std::array<double, 5> quantiles{};  // 5%, 25%, 50%, 75%, 95% of f01
    double mean_ln_ic = 0.0;
    bool truncation_warning = false;  // sigma_d >= d/3
};

struct BarrierComparison {
    double analytic_ratio = 0.0;  // kappa_b / kappa_a
    double mc_ratio = 0.0;
    SpreadReport a;
    SpreadReport b;
};

double junction_capacitance(const JunctionSpec& spec);  // eps0 eps_r A / d
double charging_energy(double capacitance);             // e^2 / 2C, joules

// WKB decay constant sqrt(2 m* phi_b)/hbar; transmission goes as exp(-2 kappa d).
double wkb_kappa(double barrier_height_ev, double mass_ratio);

double normal_resistance(const JunctionSpec& spec);  // (r0/A) exp(2 kappa d)
double critical_current(const JunctionSpec& spec);   // Ambegaokar-Baratoff
double josephson_energy(double critical_current_a);  // hbar I_c / 2e

// Eigenvalues of the charge-basis transmon Hamiltonian on n in [-cutoff,
// cutoff], ascending, in joules. Verified against a doubled cutoff; throws
// when the lowest three levels are not converged.
std::vector<double> transmon_spectrum(double e_j, double e_c, double n_g, int cutoff = 20);

// Large-E_J/E_C expressions: f01 = (sqrt(8 E_J E_C) - E_C)/h, anharmonicity
// -E_C/h, charge dispersion from the known asymptotic series.
TransmonParams asymptotic_params(double e_j, double e_c);

// Full chain: geometry -> C -> E_C, R_n -> I_c -> E_J -> asymptotic params.
TransmonParams design_params(const JunctionSpec& spec);

// d ln f01 / d ln A by centered difference; equals E_C/(h f01) analytically
// because sqrt(8 E_J E_C) is exactly area-invariant.
double area_sensitivity(const JunctionSpec& spec, double rel_step = 1e-3);

// Monte Carlo of f01 under Normal(d, sigma_d) barrier thickness, truncated
// at d > 0. Counter-based substreams make the result independent of worker
// partitioning.
SpreadReport frequency_spread(const JunctionSpec& spec, double sigma_d, int samples,
                              std::uint64_t seed, int workers = 1);

BarrierComparison compare_barriers(const JunctionSpec& a, const JunctionSpec& b, double sigma_d,
                                   int samples = 10000, std::uint64_t seed = 1);

}  // namespace finmet

#endif
