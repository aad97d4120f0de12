/* C API for the finmet toolkit: opaque handles, status codes, and
 * accessors. All functions return fm_status; fm_last_error() describes the
 * most recent failure on the calling thread. */
#ifndef FINMET_H
#define FINMET_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fm_status {
    FM_OK = 0,
    FM_ERR_INTERNAL = 1,
    FM_ERR_CONFIG = 2,      /* bad config, arguments, preconditions */
    FM_ERR_CONVERGENCE = 3, /* solver / fit / conditioning failures */
    FM_ERR_IO = 4           /* file system or parse failures */
} fm_status;

typedef struct fm_config fm_config;

const char* fm_version(void);

/* message for the last failure on this thread; empty string if none */
const char* fm_last_error(void);

void fm_string_free(char* s);

/* ---- configuration ---------------------------------------------------- */

fm_status fm_config_default(fm_config** out);
fm_status fm_config_load(const char* path, int strict, fm_config** out);
void fm_config_free(fm_config* cfg);

fm_status fm_config_set_seed(fm_config* cfg, unsigned long long seed);
/* comma-separated subset of "csv,svg,txt" */
fm_status fm_config_set_formats(fm_config* cfg, const char* formats);
/* lenient-mode warnings, newline separated; caller frees with fm_string_free */
fm_status fm_config_warnings(const fm_config* cfg, char** out);

/* ---- commands ----------------------------------------------------------
 * Each writes its outputs under outdir and returns a human-readable summary
 * (caller frees with fm_string_free; pass NULL to skip). */

fm_status fm_run_capacitance(const fm_config* cfg, const char* outdir, char** summary);
fm_status fm_run_resfit(const fm_config* cfg, const char* const* trace_paths, size_t n_traces,
                        const char* outdir, char** summary);
fm_status fm_run_series(const fm_config* cfg, const char* series_csv_or_null, const char* outdir,
                        char** summary);
fm_status fm_run_design(const fm_config* cfg, const char* outdir, char** summary);
fm_status fm_run_etchplan(const fm_config* cfg, const char* outdir, char** summary);
fm_status fm_run_sweep(const fm_config* cfg, const char* outdir, char** summary);

/* ---- scalar helpers ---------------------------------------------------- */

fm_status fm_lc_frequency(double inductance_h, double capacitance_f, double* f_hz);
fm_status fm_capacitance_ratio(double f0_hz, double fn_hz, double* ratio, int* monotonic_warning);
fm_status fm_wkb_kappa(double barrier_height_ev, double mass_ratio, double* kappa_per_m);
fm_status fm_undercut_correction(double mask_width_m, double undercut_per_side_m,
                                 double* fin_thickness_m);
fm_status fm_transmon_f01(double e_j_hz, double e_c_hz, double* f01_hz, double* anharmonicity_hz);

/* Hanger fit of an S21 trace given as parallel arrays. out_params and
 * out_sigma hold (f_r, Q_i, Q_c, phi, amplitude, phase, delay); either may
 * be NULL. */
fm_status fm_fit_hanger(const double* f_hz, const double* re, const double* im, size_t n,
                        double out_params[7], double out_sigma[7]);

#ifdef __cplusplus
}
#endif

#endif /* FINMET_H */
