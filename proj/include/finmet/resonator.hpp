#ifndef FINMET_RESONATOR_HPP
#define FINMET_RESONATOR_HPP

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace finmet {

// Lumped-element resonator: meander inductor, IDC base capacitance, n fins
// each adding fin_capacitance.
struct LEResonator {
    double inductance = 0.0;        // H
    double base_capacitance = 0.0;  // F (C_0)
    int n_fins = 0;
    double fin_capacitance = 0.0;  // F per fin (delta C)

    void validate() const;
};

double lc_frequency(double inductance, double capacitance);

struct CapacitanceRatio {
    double value = 0.0;          // (f_0/f_n)^2
    bool monotonic_warning = false;  // set when f_n > f_0
};
CapacitanceRatio capacitance_ratio(double f_0, double f_n);

struct SeriesEntry {
    int n_fins = 0;
    double f_hz = 0.0;
};

struct ResonatorSeries {
    std::vector<SeriesEntry> entries;  // sorted by n_fins, includes n = 0
    std::vector<double> ratios;        // C_n/C_0 per entry
    double slope = 0.0;                // delta C / C_0
    double slope_stderr = 0.0;
    double r_squared = 0.0;
    bool intercept_constrained = true;
    double intercept = 1.0;  // fitted intercept in unconstrained mode
    bool monotonic_warning = false;
};

// Least squares of C_n/C_0 vs n. The intercept is pinned to 1 by default
// (C_0/C_0 is exactly 1); unconstrained mode is available for diagnostics.
ResonatorSeries fit_series(std::span<const SeriesEntry> entries, bool constrain_intercept = true);

// f_n = 1/(2 pi sqrt(L (C_0 + n dC)))
std::vector<double> predict_series(const LEResonator& resonator, std::span<const int> n_list);

struct HangerBackground {
    double amplitude = 1.0;  // a
    double phase = 0.0;      // theta, radians
    double delay = 0.0;      // tau, seconds
};

// Diameter-corrected hanger parameters: phi sits in the numerator phase and
// cos(phi)/|Q_c| enters the loaded Q.
struct HangerParams {
    double f_r = 0.0;  // Hz
    double q_i = 0.0;
    double q_c = 0.0;   // magnitude of the coupling Q
    double phi = 0.0;   // asymmetry angle, radians
    HangerBackground background;

    double loaded_q() const;
    void validate() const;
};

std::complex<double> hanger_s21(const HangerParams& params, double f_hz);

struct S21Trace {
    std::vector<double> f_hz;                // strictly increasing
    std::vector<std::complex<double>> s21;   // linear units

    void validate() const;
};

struct HangerFit : HangerParams {
    std::array<double, 7> sigma{};  // 1-sigma per (f_r, q_i, q_c, phi, a, theta, tau)
    double residual = 0.0;          // rms of |model - data|
    int iterations = 0;
    bool bound_hit_warning = false;
};

// Damped least squares over (f_r, Q_i, Q_c, phi, a, theta, tau). Without a
// guess, initializes from the delay-corrected trace: f_r at min |S21|,
// loaded Q from the full width at half depth, tau from the off-resonant
// phase slope.
HangerFit fit_hanger(const S21Trace& trace, const std::optional<HangerParams>& guess = {});

struct DeviceLoss {
    double q_i = 0.0;
    double p_fin = 0.0;
    double p_rest = 0.0;
};

struct LossBudget {
    double tan_fin = 0.0;
    double tan_rest = 0.0;
    std::vector<double> predicted_inv_q;  // per device from the fitted tangents
    double residual_rms = 0.0;
};

// Solves 1/Q_i = p_fin tan_fin + p_rest tan_rest for the two loss tangents
// (least squares when overdetermined).
LossBudget extract_fin_loss(std::span<const DeviceLoss> devices);

}  // namespace finmet

#endif
