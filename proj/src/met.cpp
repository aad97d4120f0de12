#include "finmet/met.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "finmet/constants.hpp"
#include "finmet/errors.hpp"
#include "finmet/rng.hpp"

namespace finmet {

using std::numbers::pi;

void JunctionSpec::validate() const {
    if (!(barrier_thickness > 0.0)) throw domain_error("junction: barrier_thickness must be > 0");
    if (!(barrier_height_ev > 0.0)) throw domain_error("junction: barrier_height must be > 0");
    if (!(effective_mass_ratio > 0.0) || effective_mass_ratio > 2.0) {
        throw domain_error("junction: effective_mass_ratio must be in (0, 2]");
    }
    if (!(area > 0.0)) throw domain_error("junction: area must be > 0");
    if (!(barrier_eps_r >= 1.0)) throw domain_error("junction: barrier eps_r must be >= 1");
    if (!(gap_ev > 0.0)) throw domain_error("junction: superconducting gap must be > 0");
    if (!(r0 > 0.0)) throw domain_error("junction: r0 must be > 0");
    if (temperature < 0.0) throw domain_error("junction: temperature must be >= 0");
}

double junction_capacitance(const JunctionSpec& spec) {
    spec.validate();
    return phys::eps0 * spec.barrier_eps_r * spec.area / spec.barrier_thickness;
}

double charging_energy(double capacitance) {
    if (!(capacitance > 0.0)) throw domain_error("charging_energy: capacitance must be > 0");
    return phys::elem_charge * phys::elem_charge / (2.0 * capacitance);
}

double wkb_kappa(double barrier_height_ev, double mass_ratio) {
    if (!(barrier_height_ev > 0.0)) throw domain_error("wkb_kappa: barrier height must be > 0");
    if (!(mass_ratio > 0.0)) throw domain_error("wkb_kappa: mass ratio must be > 0");
    const double phi_joule = barrier_height_ev * phys::ev_to_joule;
    return std::sqrt(2.0 * mass_ratio * phys::electron_mass * phi_joule) / phys::hbar;
}

double normal_resistance(const JunctionSpec& spec) {
    spec.validate();
    const double kappa = wkb_kappa(spec.barrier_height_ev, spec.effective_mass_ratio);
    const double exponent = 2.0 * kappa * spec.barrier_thickness;
    if (exponent > 700.0) {
        throw domain_error("normal_resistance: 2 kappa d = " + std::to_string(exponent) +
                           " overflows; rescale r0 to a thinner operating point");
    }
    return spec.r0 / spec.area * std::exp(exponent);
}

double critical_current(const JunctionSpec& spec) {
    const double rn = normal_resistance(spec);
    const double gap_j = spec.gap_ev * phys::ev_to_joule;
    double thermal = 1.0;
    if (spec.temperature > 0.0) {
        thermal = std::tanh(gap_j / (2.0 * phys::boltzmann_k * spec.temperature));
    }
    return pi * gap_j / (2.0 * phys::elem_charge * rn) * thermal;
}

double josephson_energy(double critical_current_a) {
    if (!(critical_current_a > 0.0)) {
        throw domain_error("josephson_energy: critical current must be > 0");
    }
    return phys::hbar * critical_current_a / (2.0 * phys::elem_charge);
}

namespace {

// Implicit QL with Wilkinson shifts for a symmetric tridiagonal matrix;
// eigenvalues only. diag has n entries, off has n-1.
std::vector<double> tridiag_eigenvalues(std::vector<double> diag, std::vector<double> off) {
    const std::size_t n = diag.size();
    off.push_back(0.0);
    for (std::size_t l = 0; l < n; ++l) {
        int iterations = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
                if (std::abs(off[m]) <= 1e-300 + 2.3e-16 * dd) break;
            }
            if (m != l) {
                if (iterations++ == 60) {
                    throw convergence_error("tridiagonal QL failed to converge", 0.0);
                }
                double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
                double r = std::hypot(g, 1.0);
                g = diag[m] - diag[l] + off[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                std::size_t i = m;
                while (i-- > l) {
                    double f = s * off[i];
                    const double b = c * off[i];
                    r = std::hypot(f, g);
                    off[i + 1] = r;
                    if (r == 0.0) {
                        diag[i + 1] -= p;
                        off[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = diag[i + 1] - p;
                    r = (diag[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    diag[i + 1] = g + p;
                    g = c * r - b;
                }
                if (r == 0.0 && i + 1 > l) continue;
                diag[l] -= p;
                off[l] = g;
                off[m] = 0.0;
            }
        } while (m != l);
    }
    std::sort(diag.begin(), diag.end());
    return diag;
}

std::vector<double> charge_basis_eigenvalues(double e_j, double e_c, double n_g, int cutoff) {
    const int dim = 2 * cutoff + 1;
    std::vector<double> diag(dim), off(dim - 1, -0.5 * e_j);
    for (int k = 0; k < dim; ++k) {
        const double n = k - cutoff - n_g;
        diag[k] = 4.0 * e_c * n * n;
    }
    return tridiag_eigenvalues(std::move(diag), std::move(off));
}

// f01 from the large-ratio expansion, in Hz
double asymptotic_f01(double e_j, double e_c) {
    return (std::sqrt(8.0 * e_j * e_c) - e_c) / phys::planck_h;
}

}  // namespace

std::vector<double> transmon_spectrum(double e_j, double e_c, double n_g, int cutoff) {
    if (!(e_j > 0.0) || !(e_c > 0.0)) {
        throw domain_error("transmon_spectrum: E_J and E_C must be > 0");
    }
    if (cutoff < 15) throw domain_error("transmon_spectrum: cutoff must be >= 15");
    const std::vector<double> ev = charge_basis_eigenvalues(e_j, e_c, n_g, cutoff);
    const std::vector<double> ev2 = charge_basis_eigenvalues(e_j, e_c, n_g, 2 * cutoff);
    for (int k = 0; k < 3; ++k) {
        const double denom = std::max(std::abs(ev2[k]), e_c);
        if (std::abs(ev[k] - ev2[k]) / denom >= 1e-10) {
            throw convergence_error(
                "transmon_spectrum: levels not converged at cutoff " + std::to_string(cutoff) +
                    "; increase the cutoff",
                std::abs(ev[k] - ev2[k]) / denom);
        }
    }
    return ev;
}

TransmonParams asymptotic_params(double e_j, double e_c) {
    if (!(e_j > 0.0) || !(e_c > 0.0)) {
        throw domain_error("asymptotic_params: E_J and E_C must be > 0");
    }
    const double ratio = e_j / e_c;
    if (ratio < 20.0) {
        throw domain_error("asymptotic_params: E_J/E_C = " + std::to_string(ratio) +
                           " is below 20; diagonalize with transmon_spectrum instead");
    }
    TransmonParams p;
    p.e_j = e_j;
    p.e_c = e_c;
    p.ratio = ratio;
    p.transmon_regime = ratio >= 50.0 * (1.0 - 1e-12);
    p.f01 = asymptotic_f01(e_j, e_c);
    p.anharmonicity = -e_c / phys::planck_h;
    // charge dispersion of the 0-1 transition from the standard asymptotic
    // series; epsilon_m alternates in sign so the transition picks up both
    const double root = std::sqrt(8.0 * ratio);
    const double common = std::sqrt(2.0 / pi) * std::exp(-root);
    const double eps0 = e_c * 32.0 * std::pow(ratio / 2.0, 0.75) * common;
    const double eps1 = e_c * 512.0 * std::pow(ratio / 2.0, 1.25) * common;
    p.charge_dispersion_01 = (eps0 + eps1) / phys::planck_h;
    return p;
}

TransmonParams design_params(const JunctionSpec& spec) {
    const double e_c = charging_energy(junction_capacitance(spec));
    const double e_j = josephson_energy(critical_current(spec));
    if (e_j / e_c >= 20.0) return asymptotic_params(e_j, e_c);
    // too anharmonic for the expansion: diagonalize
    TransmonParams p;
    p.e_j = e_j;
    p.e_c = e_c;
    p.ratio = e_j / e_c;
    p.transmon_regime = false;
    const auto ev0 = transmon_spectrum(e_j, e_c, 0.0, 20);
    const auto evh = transmon_spectrum(e_j, e_c, 0.5, 20);
    p.f01 = (ev0[1] - ev0[0]) / phys::planck_h;
    p.anharmonicity = (ev0[2] - 2.0 * ev0[1] + ev0[0]) / phys::planck_h;
    p.charge_dispersion_01 = std::abs((evh[1] - evh[0]) - (ev0[1] - ev0[0])) / phys::planck_h;
    return p;
}

double area_sensitivity(const JunctionSpec& spec, double rel_step) {
    spec.validate();
    if (!(rel_step > 0.0 && rel_step < 0.1)) {
        throw domain_error("area_sensitivity: rel_step must be in (0, 0.1)");
    }
    auto f01_at = [&](double scale) {
        JunctionSpec s = spec;
        s.area = spec.area * scale;
        const double e_c = charging_energy(junction_capacitance(s));
        const double e_j = josephson_energy(critical_current(s));
        const TransmonParams p = asymptotic_params(e_j, e_c);
        return p.f01;
    };
    const double up = f01_at(1.0 + rel_step);
    const double dn = f01_at(1.0 - rel_step);
    return (std::log(up) - std::log(dn)) /
           (std::log(1.0 + rel_step) - std::log(1.0 - rel_step));
}

SpreadReport frequency_spread(const JunctionSpec& spec, double sigma_d, int samples,
                              std::uint64_t seed, int workers) {
    spec.validate();
    if (samples < 1000) throw domain_error("frequency_spread: need >= 1000 samples");
    if (sigma_d < 0.0) throw domain_error("frequency_spread: sigma_d must be >= 0");

    const double kappa = wkb_kappa(spec.barrier_height_ev, spec.effective_mass_ratio);
    SpreadReport report;
    report.sigma_d = sigma_d;
    report.samples = samples;
    report.seed = seed;
    report.kappa = kappa;
    report.analytic_rel_spread = kappa * sigma_d;
    report.truncation_warning = sigma_d >= spec.barrier_thickness / 3.0;

    std::vector<double> f01(samples), ln_ic(samples);
    auto sample_range = [&](int begin, int end) {
        for (int k = begin; k < end; ++k) {
            rng::SampleStream stream(seed, static_cast<std::uint64_t>(k));
            double d = 0.0;
            do {
                // sigma 0 degenerates to the nominal thickness exactly
                d = sigma_d > 0.0 ? spec.barrier_thickness + sigma_d * stream.normal()
                                  : spec.barrier_thickness;
            } while (!(d > 0.0));
            JunctionSpec s = spec;
            s.barrier_thickness = d;
            const double e_c = charging_energy(junction_capacitance(s));
            const double ic = critical_current(s);
            const double e_j = josephson_energy(ic);
            f01[k] = asymptotic_f01(e_j, e_c);
            ln_ic[k] = std::log(ic);
        }
    };
    if (workers <= 1) {
        sample_range(0, samples);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (samples + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const int begin = w * chunk;
            const int end = std::min(samples, begin + chunk);
            if (begin < end) pool.emplace_back(sample_range, begin, end);
        }
        for (auto& t : pool) t.join();
    }

    double mean = 0.0, mean_ln = 0.0;
    for (int k = 0; k < samples; ++k) {
        mean += f01[k];
        mean_ln += ln_ic[k];
    }
    mean /= samples;
    mean_ln /= samples;
    double var = 0.0;
    if (sigma_d > 0.0) {
        for (int k = 0; k < samples; ++k) var += (f01[k] - mean) * (f01[k] - mean);
        var /= static_cast<double>(samples - 1);
    }
    report.mean_f01 = mean;
    report.sigma_f01 = std::sqrt(var);
    report.rel_spread = report.sigma_f01 / mean;
    report.mean_ln_ic = mean_ln;

    std::vector<double> sorted = f01;
    std::sort(sorted.begin(), sorted.end());
    const double qs[5] = {0.05, 0.25, 0.50, 0.75, 0.95};
    for (int q = 0; q < 5; ++q) {
        const auto idx = static_cast<std::size_t>(std::lround(qs[q] * (samples - 1)));
        report.quantiles[q] = sorted[idx];
    }
    return report;
}

BarrierComparison compare_barriers(const JunctionSpec& a, const JunctionSpec& b, double sigma_d,
                                   int samples, std::uint64_t seed) {
    BarrierComparison cmp;
    cmp.a = frequency_spread(a, sigma_d, samples, seed);
    cmp.b = frequency_spread(b, sigma_d, samples, seed);
    cmp.analytic_ratio = cmp.b.kappa / cmp.a.kappa;
    cmp.mc_ratio = cmp.b.rel_spread / cmp.a.rel_spread;
    return cmp;
}

}  // namespace finmet
