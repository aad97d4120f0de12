#include "finmet/resonator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "finmet/errors.hpp"

namespace finmet {

using std::numbers::pi;

void LEResonator::validate() const {
    if (!(inductance > 0.0)) throw domain_error("resonator: inductance must be > 0");
    if (!(base_capacitance > 0.0)) throw domain_error("resonator: base capacitance must be > 0");
    if (n_fins < 0) throw domain_error("resonator: n_fins must be >= 0");
    if (fin_capacitance < 0.0) throw domain_error("resonator: fin capacitance must be >= 0");
}

double lc_frequency(double inductance, double capacitance) {
    if (!(inductance > 0.0) || !(capacitance > 0.0)) {
        throw domain_error("lc_frequency: inductance and capacitance must be > 0");
    }
    return 1.0 / (2.0 * pi * std::sqrt(inductance * capacitance));
}

CapacitanceRatio capacitance_ratio(double f_0, double f_n) {
    if (!(f_0 > 0.0) || !(f_n > 0.0)) {
        throw domain_error("capacitance_ratio: frequencies must be > 0");
    }
    CapacitanceRatio r;
    const double q = f_0 / f_n;
    r.value = q * q;
    r.monotonic_warning = f_n > f_0;  // fins should only add capacitance
    return r;
}

ResonatorSeries fit_series(std::span<const SeriesEntry> entries, bool constrain_intercept) {
    if (entries.size() < 3) {
        throw domain_error("fit_series: need at least 3 entries, got " +
                           std::to_string(entries.size()));
    }
    ResonatorSeries out;
    out.entries.assign(entries.begin(), entries.end());
    std::sort(out.entries.begin(), out.entries.end(),
              [](const SeriesEntry& a, const SeriesEntry& b) { return a.n_fins < b.n_fins; });
    if (out.entries.front().n_fins != 0) {
        throw domain_error("fit_series: series must contain the n = 0 reference resonator");
    }
    const double f0 = out.entries.front().f_hz;
    out.ratios.reserve(out.entries.size());
    for (const SeriesEntry& e : out.entries) {
        const CapacitanceRatio r = capacitance_ratio(f0, e.f_hz);
        out.ratios.push_back(r.value);
        out.monotonic_warning = out.monotonic_warning || r.monotonic_warning;
    }

    const std::size_t n = out.entries.size();
    out.intercept_constrained = constrain_intercept;
    double ss_res = 0.0;
    if (constrain_intercept) {
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double x = out.entries[k].n_fins;
            sxy += x * (out.ratios[k] - 1.0);
            sxx += x * x;
        }
        out.slope = sxy / sxx;
        out.intercept = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double e = out.ratios[k] - (1.0 + out.slope * out.entries[k].n_fins);
            ss_res += e * e;
        }
        out.slope_stderr = std::sqrt(ss_res / static_cast<double>(n - 1) / sxx);
    } else {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double x = out.entries[k].n_fins, y = out.ratios[k];
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double den = n * sxx - sx * sx;
        out.slope = (n * sxy - sx * sy) / den;
        out.intercept = (sy - out.slope * sx) / n;
        for (std::size_t k = 0; k < n; ++k) {
            const double e =
                out.ratios[k] - (out.intercept + out.slope * out.entries[k].n_fins);
            ss_res += e * e;
        }
        out.slope_stderr =
            std::sqrt(ss_res / static_cast<double>(n - 2) * n / den);
    }
    double mean = 0.0;
    for (double r : out.ratios) mean += r;
    mean /= static_cast<double>(n);
    double ss_tot = 0.0;
    for (double r : out.ratios) ss_tot += (r - mean) * (r - mean);
    out.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
    return out;
}

std::vector<double> predict_series(const LEResonator& resonator, std::span<const int> n_list) {
    resonator.validate();
    std::vector<double> out;
    out.reserve(n_list.size());
    for (int n : n_list) {
        if (n < 0) throw domain_error("predict_series: fin count must be >= 0");
        out.push_back(lc_frequency(resonator.inductance,
                                   resonator.base_capacitance + n * resonator.fin_capacitance));
    }
    return out;
}

double HangerParams::loaded_q() const {
    return 1.0 / (1.0 / q_i + std::cos(phi) / q_c);
}

void HangerParams::validate() const {
    if (!(f_r > 0.0)) throw domain_error("hanger: f_r must be > 0");
    if (!(q_i > 0.0) || !(q_c > 0.0)) throw domain_error("hanger: Q_i and Q_c must be > 0");
    if (!(std::abs(phi) < pi / 2)) throw domain_error("hanger: |phi| must be < pi/2");
    if (!(background.amplitude > 0.0)) throw domain_error("hanger: background amplitude must be > 0");
}

std::complex<double> hanger_s21(const HangerParams& p, double f_hz) {
    const double q = p.loaded_q();
    const std::complex<double> num = (q / p.q_c) * std::polar(1.0, p.phi);
    const std::complex<double> den(1.0, 2.0 * q * (f_hz - p.f_r) / p.f_r);
    const std::complex<double> bg =
        std::polar(p.background.amplitude, p.background.phase + 2.0 * pi * f_hz * p.background.delay);
    return bg * (1.0 - num / den);
}

void S21Trace::validate() const {
    if (f_hz.size() != s21.size()) throw domain_error("trace: frequency/value length mismatch");
    if (f_hz.size() < 50) {
        throw domain_error("trace: need at least 50 points, got " + std::to_string(f_hz.size()));
    }
    for (std::size_t i = 1; i < f_hz.size(); ++i) {
        if (!(f_hz[i] > f_hz[i - 1])) {
            throw domain_error("trace: frequencies must be strictly increasing");
        }
    }
}

namespace {

// internal optimizer coordinates, all O(1):
// u = [(f_r - f_mid)/span, ln Q_i, ln Q_c, phi, ln a, theta, 2 pi span tau]
struct FitFrame {
    double f_mid = 0.0;
    double span = 0.0;

    HangerParams params(const Eigen::VectorXd& u) const {
        HangerParams p;
        p.f_r = f_mid + u[0] * span;
        p.q_i = std::exp(u[1]);
        p.q_c = std::exp(u[2]);
        p.phi = u[3];
        p.background.amplitude = std::exp(u[4]);
        p.background.phase = u[5];
        p.background.delay = u[6] / (2.0 * pi * span);
        return p;
    }

    Eigen::VectorXd pack(const HangerParams& p) const {
        Eigen::VectorXd u(7);
        u << (p.f_r - f_mid) / span, std::log(p.q_i), std::log(p.q_c), p.phi,
            std::log(p.background.amplitude), p.background.phase,
            2.0 * pi * span * p.background.delay;
        return u;
    }
};

constexpr double kLnQMin = 0.0;    // Q = 1
constexpr double kLnQMax = 27.63;  // Q ~ 1e12
constexpr double kPhiMax = 1.45;

bool clamp_params(Eigen::VectorXd& u) {
    bool hit = false;
    for (int k : {1, 2}) {
        if (u[k] < kLnQMin) { u[k] = kLnQMin; hit = true; }
        if (u[k] > kLnQMax) { u[k] = kLnQMax; hit = true; }
    }
    if (u[3] < -kPhiMax) { u[3] = -kPhiMax; hit = true; }
    if (u[3] > kPhiMax) { u[3] = kPhiMax; hit = true; }
    return hit;
}

Eigen::VectorXd residuals(const FitFrame& frame, const S21Trace& trace,
                          const Eigen::VectorXd& u) {
    const HangerParams p = frame.params(u);
    const std::size_t n = trace.f_hz.size();
    Eigen::VectorXd r(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::complex<double> d = hanger_s21(p, trace.f_hz[i]) - trace.s21[i];
        r[2 * i] = d.real();
        r[2 * i + 1] = d.imag();
    }
    return r;
}

Eigen::MatrixXd jacobian(const FitFrame& frame, const S21Trace& trace, const Eigen::VectorXd& u) {
    const std::size_t n = trace.f_hz.size();
    Eigen::MatrixXd j(2 * n, 7);
    const double h = 1e-6;
    for (int k = 0; k < 7; ++k) {
        Eigen::VectorXd up = u, dn = u;
        up[k] += h;
        dn[k] -= h;
        j.col(k) = (residuals(frame, trace, up) - residuals(frame, trace, dn)) / (2.0 * h);
    }
    return j;
}

// slope of the unwrapped phase over [begin, end)
double phase_slope(const S21Trace& trace, std::size_t begin, std::size_t end) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    double prev = std::arg(trace.s21[begin]);
    double unwrapped = prev;
    const double f0 = trace.f_hz[begin];
    std::size_t n = 0;
    for (std::size_t i = begin; i < end; ++i) {
        double ph = std::arg(trace.s21[i]);
        double d = ph - prev;
        while (d > pi) d -= 2.0 * pi;
        while (d < -pi) d += 2.0 * pi;
        unwrapped += (i == begin) ? 0.0 : d;
        prev = ph;
        const double x = trace.f_hz[i] - f0;
        sx += x;
        sy += unwrapped;
        sxx += x * x;
        sxy += x * unwrapped;
        ++n;
    }
    const double den = n * sxx - sx * sx;
    return den > 0.0 ? (n * sxy - sx * sy) / den : 0.0;
}

HangerParams auto_initialize(const S21Trace& trace) {
    const std::size_t n = trace.f_hz.size();
    const std::size_t tail = std::max<std::size_t>(5, n / 10);

    const double slope_lo = phase_slope(trace, 0, tail);
    const double slope_hi = phase_slope(trace, n - tail, n);
    const double tau = 0.5 * (slope_lo + slope_hi) / (2.0 * pi);

    std::vector<double> mag(n);
    std::vector<std::complex<double>> corrected(n);
    for (std::size_t i = 0; i < n; ++i) {
        corrected[i] = trace.s21[i] * std::polar(1.0, -2.0 * pi * trace.f_hz[i] * tau);
        mag[i] = std::abs(corrected[i]);
    }

    std::vector<double> tails;
    for (std::size_t i = 0; i < tail; ++i) {
        tails.push_back(mag[i]);
        tails.push_back(mag[n - 1 - i]);
    }
    std::nth_element(tails.begin(), tails.begin() + tails.size() / 2, tails.end());
    const double amp = std::max(tails[tails.size() / 2], 1e-12);

    std::complex<double> mean_dir = 0.0;
    for (std::size_t i = 0; i < tail; ++i) mean_dir += corrected[i] + corrected[n - 1 - i];
    const double theta = std::arg(mean_dir);

    const std::size_t imin = std::min_element(mag.begin(), mag.end()) - mag.begin();
    const double f_r = trace.f_hz[imin];
    const double depth = amp - mag[imin];
    if (!(depth > 0.01 * amp)) {
        throw domain_error("fit_hanger: no resonance dip found in the trace");
    }
    const double half = amp - 0.5 * depth;
    std::size_t lo = imin, hi = imin;
    while (lo > 0 && mag[lo] < half) --lo;
    while (hi + 1 < n && mag[hi] < half) ++hi;
    if (lo == 0 || hi == n - 1) {
        throw domain_error("fit_hanger: trace span does not cover the resonance linewidth");
    }
    const double width = trace.f_hz[hi] - trace.f_hz[lo];
    const double q_loaded = f_r / std::max(width, 1e-12);
    const double span = trace.f_hz.back() - trace.f_hz.front();
    if (span < 5.0 * f_r / q_loaded) {
        throw domain_error("fit_hanger: trace must span at least 5 linewidths");
    }

    const double dip_fraction = std::min(depth / amp, 0.999);
    const double q_c = q_loaded / dip_fraction;
    const double inv_qi = std::max(1.0 / q_loaded - 1.0 / q_c, 1e-12 / q_loaded);

    HangerParams p;
    p.f_r = f_r;
    p.q_i = 1.0 / inv_qi;
    p.q_c = q_c;
    p.phi = 0.0;
    p.background.amplitude = amp;
    p.background.phase = theta;
    p.background.delay = tau;
    return p;
}

}  // namespace

HangerFit fit_hanger(const S21Trace& trace, const std::optional<HangerParams>& guess) {
    trace.validate();

    FitFrame frame;
    frame.f_mid = 0.5 * (trace.f_hz.front() + trace.f_hz.back());
    frame.span = trace.f_hz.back() - trace.f_hz.front();

    HangerParams init = guess ? *guess : auto_initialize(trace);
    init.validate();
    // the model's theta is referenced to f=0; wrap into (-pi, pi] for scaling
    init.background.phase = std::remainder(init.background.phase, 2.0 * pi);

    Eigen::VectorXd u = frame.pack(init);
    bool bound_hit = clamp_params(u);

    Eigen::VectorXd r = residuals(frame, trace, u);
    double cost = r.squaredNorm();
    double lambda = 1e-4;
    int iter = 0;
    const int max_iter = 200;
    bool converged = false;
    while (iter < max_iter && !converged) {
        ++iter;
        const Eigen::MatrixXd j = jacobian(frame, trace, u);
        const Eigen::MatrixXd a = j.transpose() * j;
        const Eigen::VectorXd g = j.transpose() * r;
        if (g.lpNorm<Eigen::Infinity>() < 1e-14 * std::max(cost, 1.0)) {
            converged = true;
            break;
        }
        bool accepted = false;
        for (int tries = 0; tries < 40; ++tries) {
            Eigen::MatrixXd damped = a;
            for (int k = 0; k < 7; ++k) damped(k, k) += lambda * std::max(a(k, k), 1e-12);
            const Eigen::VectorXd step = damped.ldlt().solve(-g);
            Eigen::VectorXd u_try = u + step;
            bound_hit = clamp_params(u_try) || bound_hit;
            const Eigen::VectorXd r_try = residuals(frame, trace, u_try);
            const double cost_try = r_try.squaredNorm();
            if (cost_try < cost) {
                const double improvement = (cost - cost_try) / std::max(cost, 1e-300);
                u = u_try;
                r = r_try;
                cost = cost_try;
                lambda = std::max(lambda / 3.0, 1e-12);
                accepted = true;
                converged = improvement < 1e-14;
                break;
            }
            lambda *= 4.0;
            if (lambda > 1e12) break;
        }
        if (!accepted) {
            converged = true;  // damping maxed out: at a minimum to numeric precision
            break;
        }
    }

    const std::size_t n = trace.f_hz.size();
    const double rms = std::sqrt(cost / static_cast<double>(n));
    if (!converged) {
        throw fit_error("fit_hanger: no convergence (rms residual " + std::to_string(rms) + ")",
                        rms);
    }

    HangerFit fit;
    static_cast<HangerParams&>(fit) = frame.params(u);
    fit.residual = rms;
    fit.iterations = iter;
    fit.bound_hit_warning = bound_hit;
    if (fit.f_r < trace.f_hz.front() || fit.f_r > trace.f_hz.back()) {
        throw fit_error("fit_hanger: fitted resonance left the trace span", rms);
    }

    // covariance from the Jacobian at the optimum, mapped to natural units
    const Eigen::MatrixXd j = jacobian(frame, trace, u);
    const Eigen::MatrixXd a = j.transpose() * j;
    const double dof = static_cast<double>(2 * n) - 7.0;
    const double var = cost / std::max(dof, 1.0);
    const Eigen::MatrixXd cov = var * a.inverse();
    const double scale[7] = {frame.span,
                             fit.q_i,
                             fit.q_c,
                             1.0,
                             fit.background.amplitude,
                             1.0,
                             1.0 / (2.0 * pi * frame.span)};
    for (int k = 0; k < 7; ++k) {
        fit.sigma[k] = std::sqrt(std::max(cov(k, k), 0.0)) * scale[k];
    }
    return fit;
}

LossBudget extract_fin_loss(std::span<const DeviceLoss> devices) {
    if (devices.size() < 2) {
        throw domain_error("extract_fin_loss: need at least 2 devices");
    }
    double pmin = devices[0].p_fin, pmax = devices[0].p_fin;
    for (const DeviceLoss& d : devices) {
        if (!(d.q_i > 0.0)) throw domain_error("extract_fin_loss: Q_i must be > 0");
        if (d.p_fin < 0.0 || d.p_rest < 0.0 || d.p_fin + d.p_rest > 1.0 + 1e-9) {
            throw domain_error("extract_fin_loss: participations must be in [0,1] with sum <= 1");
        }
        pmin = std::min(pmin, d.p_fin);
        pmax = std::max(pmax, d.p_fin);
    }
    if (pmax - pmin <= 1e-12 * std::max(pmax, 1e-300)) {
        throw conditioning_error("extract_fin_loss: all devices share the same fin participation");
    }

    Eigen::MatrixXd m(devices.size(), 2);
    Eigen::VectorXd b(devices.size());
    for (std::size_t k = 0; k < devices.size(); ++k) {
        m(k, 0) = devices[k].p_fin;
        m(k, 1) = devices[k].p_rest;
        b[k] = 1.0 / devices[k].q_i;
    }
    const Eigen::Matrix2d normal = m.transpose() * m;
    const double det = normal.determinant();
    const double scale = normal(0, 0) * normal(1, 1);
    if (!(det > 1e-12 * scale)) {
        throw conditioning_error(
            "extract_fin_loss: participation vectors are nearly parallel; the two loss "
            "channels cannot be separated");
    }
    const Eigen::Vector2d x = normal.ldlt().solve(m.transpose() * b);

    LossBudget budget;
    budget.tan_fin = x[0];
    budget.tan_rest = x[1];
    double ss = 0.0;
    for (std::size_t k = 0; k < devices.size(); ++k) {
        const double pred = m(k, 0) * x[0] + m(k, 1) * x[1];
        budget.predicted_inv_q.push_back(pred);
        ss += (pred - b[k]) * (pred - b[k]);
    }
    budget.residual_rms = std::sqrt(ss / static_cast<double>(devices.size()));
    return budget;
}

}  // namespace finmet
