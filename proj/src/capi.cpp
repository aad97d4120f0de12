#include "finmet.h"

#include <cstring>
#include <sstream>
#include <string>

#include "finmet/commands.hpp"
#include "finmet/errors.hpp"
#include "finmet/fabplan.hpp"
#include "finmet/met.hpp"
#include "finmet/resonator.hpp"

struct fm_config {
    finmet::ProjectConfig cfg;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
fm_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return FM_OK;
    } catch (const finmet::error& e) {
        g_last_error = e.what();
        switch (e.code()) {
            case finmet::errc::config: return FM_ERR_CONFIG;
            case finmet::errc::convergence: return FM_ERR_CONVERGENCE;
            case finmet::errc::io: return FM_ERR_IO;
            default: return FM_ERR_INTERNAL;
        }
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return FM_ERR_INTERNAL;
    }
}

fm_status run_command(const fm_config* cfg, char** summary, auto&& command) {
    if (!cfg) {
        g_last_error = "null config";
        return FM_ERR_CONFIG;
    }
    return guarded([&] {
        const finmet::CommandResult result = command(cfg->cfg);
        if (summary) *summary = dup_string(result.summary);
    });
}

}  // namespace

extern "C" {

const char* fm_version(void) { return finmet::kVersion; }

const char* fm_last_error(void) { return g_last_error.c_str(); }

void fm_string_free(char* s) { std::free(s); }

fm_status fm_config_default(fm_config** out) {
    if (!out) return FM_ERR_CONFIG;
    return guarded([&] { *out = new fm_config{finmet::default_config()}; });
}

fm_status fm_config_load(const char* path, int strict, fm_config** out) {
    if (!out || !path) {
        g_last_error = "null argument";
        return FM_ERR_CONFIG;
    }
    return guarded([&] { *out = new fm_config{finmet::load_config(path, strict != 0)}; });
}

void fm_config_free(fm_config* cfg) { delete cfg; }

fm_status fm_config_set_seed(fm_config* cfg, unsigned long long seed) {
    if (!cfg) return FM_ERR_CONFIG;
    cfg->cfg.monte_carlo.seed = seed;
    return FM_OK;
}

fm_status fm_config_set_formats(fm_config* cfg, const char* formats) {
    if (!cfg || !formats) {
        g_last_error = "null argument";
        return FM_ERR_CONFIG;
    }
    return guarded([&] {
        std::set<std::string> parsed;
        std::stringstream ss(formats);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) continue;
            if (tok != "csv" && tok != "svg" && tok != "txt") {
                throw finmet::config_error("unknown output format \"" + tok +
                                           "\" (expected csv, svg or txt)");
            }
            parsed.insert(tok);
        }
        if (parsed.empty()) throw finmet::config_error("no output format given");
        cfg->cfg.formats = std::move(parsed);
    });
}

fm_status fm_config_warnings(const fm_config* cfg, char** out) {
    if (!cfg || !out) return FM_ERR_CONFIG;
    std::string joined;
    for (const std::string& w : cfg->cfg.warnings) {
        joined += w;
        joined += '\n';
    }
    *out = dup_string(joined);
    return FM_OK;
}

fm_status fm_run_capacitance(const fm_config* cfg, const char* outdir, char** summary) {
    return run_command(cfg, summary, [&](const finmet::ProjectConfig& c) {
        return finmet::cmd_capacitance(c, outdir ? outdir : "");
    });
}

fm_status fm_run_resfit(const fm_config* cfg, const char* const* trace_paths, size_t n_traces,
                        const char* outdir, char** summary) {
    if (!cfg) {
        g_last_error = "null config";
        return FM_ERR_CONFIG;
    }
    bool partial = false;
    std::string failures;
    const fm_status rc = guarded([&] {
        std::vector<std::string> paths;
        for (size_t i = 0; i < n_traces; ++i) paths.emplace_back(trace_paths[i]);
        const finmet::CommandResult result = finmet::cmd_resfit(cfg->cfg, paths, outdir ? outdir : "");
        if (summary) *summary = dup_string(result.summary);
        for (const std::string& e : result.errors) {
            failures += e;
            failures += '\n';
        }
        partial = !result.errors.empty();
    });
    if (rc != FM_OK) return rc;
    if (partial) {
        // the batch continued, but a failed sub-task makes the run nonzero
        g_last_error = failures;
        return FM_ERR_IO;
    }
    return FM_OK;
}

fm_status fm_run_series(const fm_config* cfg, const char* series_csv_or_null, const char* outdir,
                        char** summary) {
    return run_command(cfg, summary, [&](const finmet::ProjectConfig& c) {
        return finmet::cmd_series(c, series_csv_or_null ? series_csv_or_null : "",
                                  outdir ? outdir : "");
    });
}

fm_status fm_run_design(const fm_config* cfg, const char* outdir, char** summary) {
    return run_command(cfg, summary, [&](const finmet::ProjectConfig& c) {
        return finmet::cmd_design(c, outdir ? outdir : "");
    });
}

fm_status fm_run_etchplan(const fm_config* cfg, const char* outdir, char** summary) {
    return run_command(cfg, summary, [&](const finmet::ProjectConfig& c) {
        return finmet::cmd_etchplan(c, outdir ? outdir : "");
    });
}

fm_status fm_run_sweep(const fm_config* cfg, const char* outdir, char** summary) {
    return run_command(cfg, summary, [&](const finmet::ProjectConfig& c) {
        return finmet::cmd_sweep(c, outdir ? outdir : "");
    });
}

fm_status fm_lc_frequency(double inductance_h, double capacitance_f, double* f_hz) {
    if (!f_hz) return FM_ERR_CONFIG;
    return guarded([&] { *f_hz = finmet::lc_frequency(inductance_h, capacitance_f); });
}

fm_status fm_capacitance_ratio(double f0_hz, double fn_hz, double* ratio,
                               int* monotonic_warning) {
    if (!ratio) return FM_ERR_CONFIG;
    return guarded([&] {
        const finmet::CapacitanceRatio r = finmet::capacitance_ratio(f0_hz, fn_hz);
        *ratio = r.value;
        if (monotonic_warning) *monotonic_warning = r.monotonic_warning ? 1 : 0;
    });
}

fm_status fm_wkb_kappa(double barrier_height_ev, double mass_ratio, double* kappa_per_m) {
    if (!kappa_per_m) return FM_ERR_CONFIG;
    return guarded([&] { *kappa_per_m = finmet::wkb_kappa(barrier_height_ev, mass_ratio); });
}

fm_status fm_undercut_correction(double mask_width_m, double undercut_per_side_m,
                                 double* fin_thickness_m) {
    if (!fin_thickness_m) return FM_ERR_CONFIG;
    return guarded(
        [&] { *fin_thickness_m = finmet::undercut_correction(mask_width_m, undercut_per_side_m); });
}

fm_status fm_transmon_f01(double e_j_hz, double e_c_hz, double* f01_hz,
                          double* anharmonicity_hz) {
    if (!f01_hz) return FM_ERR_CONFIG;
    return guarded([&] {
        constexpr double h = 6.62607015e-34;
        const finmet::TransmonParams p = finmet::asymptotic_params(e_j_hz * h, e_c_hz * h);
        *f01_hz = p.f01;
        if (anharmonicity_hz) *anharmonicity_hz = p.anharmonicity;
    });
}

fm_status fm_fit_hanger(const double* f_hz, const double* re, const double* im, size_t n,
                        double out_params[7], double out_sigma[7]) {
    if (!f_hz || !re || !im) {
        g_last_error = "null trace arrays";
        return FM_ERR_CONFIG;
    }
    return guarded([&] {
        finmet::S21Trace trace;
        trace.f_hz.assign(f_hz, f_hz + n);
        trace.s21.reserve(n);
        for (size_t i = 0; i < n; ++i) trace.s21.emplace_back(re[i], im[i]);
        const finmet::HangerFit fit = finmet::fit_hanger(trace);
        if (out_params) {
            out_params[0] = fit.f_r;
            out_params[1] = fit.q_i;
            out_params[2] = fit.q_c;
            out_params[3] = fit.phi;
            out_params[4] = fit.background.amplitude;
            out_params[5] = fit.background.phase;
            out_params[6] = fit.background.delay;
        }
        if (out_sigma) {
            for (int k = 0; k < 7; ++k) out_sigma[k] = fit.sigma[k];
        }
    });
}

}  // extern "C"
