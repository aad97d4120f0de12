// finmet command line: thin argument layer over the C API in finmet.h.
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "finmet.h"

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string outdir;
    std::string format;
    unsigned long long seed = 0;
    bool have_seed = false;
    bool strict = false;
};

std::string default_outdir() {
    if (const char* env = std::getenv("FINMET_OUT")) return env;
    return "finmet_out";
}

int fail(fm_status status) {
    std::fprintf(stderr, "error: %s\n", fm_last_error());
    return static_cast<int>(status);
}

fm_config* make_config(const GlobalOpts& opts, fm_status& status) {
    fm_config* cfg = nullptr;
    status = opts.config_path.empty() ? fm_config_default(&cfg)
                                      : fm_config_load(opts.config_path.c_str(),
                                                       opts.strict ? 1 : 0, &cfg);
    if (status != FM_OK) return nullptr;
    char* warnings = nullptr;
    if (fm_config_warnings(cfg, &warnings) == FM_OK && warnings && warnings[0]) {
        std::fprintf(stderr, "%s", warnings);
    }
    fm_string_free(warnings);
    if (opts.have_seed) fm_config_set_seed(cfg, opts.seed);
    if (!opts.format.empty()) {
        status = fm_config_set_formats(cfg, opts.format.c_str());
        if (status != FM_OK) {
            fm_config_free(cfg);
            return nullptr;
        }
    }
    return cfg;
}

int run(const GlobalOpts& opts,
        fm_status (*command)(const fm_config*, const char*, char**)) {
    fm_status status = FM_OK;
    fm_config* cfg = make_config(opts, status);
    if (!cfg) return fail(status);
    char* summary = nullptr;
    const std::string outdir = opts.outdir.empty() ? default_outdir() : opts.outdir;
    status = command(cfg, outdir.c_str(), &summary);
    if (status == FM_OK && summary) std::printf("%s", summary);
    fm_string_free(summary);
    fm_config_free(cfg);
    return status == FM_OK ? 0 : fail(status);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fin capacitor and merged-element transmon design toolkit"};
    app.set_version_flag("--version", fm_version());
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    GlobalOpts opts;
    app.add_option("--config", opts.config_path, "config file (JSON with explicit units)");
    app.add_option("--out", opts.outdir, "output directory (default $FINMET_OUT or finmet_out)");
    app.add_option("--format", opts.format, "restrict outputs: csv, svg or txt (comma list)");
    auto* seed_opt = app.add_option("--seed", opts.seed, "Monte Carlo seed override");
    app.add_flag("--strict", opts.strict, "reject unknown config keys");

    auto* cap = app.add_subcommand("capacitance", "solve the fin cross-section for C/L");
    auto* resfit = app.add_subcommand("resfit", "fit hanger S21 traces");
    std::vector<std::string> traces;
    resfit->add_option("traces", traces, "Touchstone .s2p or CSV trace files");
    auto* series = app.add_subcommand("series", "reduce a frequency-vs-fin-count series");
    std::string series_csv;
    series->add_option("--data", series_csv, "CSV with n_fins,f_hz columns (default: predicted)");
    auto* design = app.add_subcommand("design", "junction and transmon design report");
    auto* etchplan = app.add_subcommand("etchplan", "digital-etch thinning schedule");
    auto* sweep = app.add_subcommand("sweep", "design-space sweep CSV");

    for (CLI::App* sub : {cap, resfit, series, design, etchplan, sweep}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);
    opts.have_seed = seed_opt->count() > 0;

    if (app.got_subcommand(cap)) return run(opts, fm_run_capacitance);
    if (app.got_subcommand(design)) return run(opts, fm_run_design);
    if (app.got_subcommand(etchplan)) return run(opts, fm_run_etchplan);
    if (app.got_subcommand(sweep)) return run(opts, fm_run_sweep);

    if (app.got_subcommand(series)) {
        fm_status status = FM_OK;
        fm_config* cfg = make_config(opts, status);
        if (!cfg) return fail(status);
        char* summary = nullptr;
        const std::string outdir = opts.outdir.empty() ? default_outdir() : opts.outdir;
        status = fm_run_series(cfg, series_csv.empty() ? nullptr : series_csv.c_str(),
                               outdir.c_str(), &summary);
        if (status == FM_OK && summary) std::printf("%s", summary);
        fm_string_free(summary);
        fm_config_free(cfg);
        return status == FM_OK ? 0 : fail(status);
    }

    if (app.got_subcommand(resfit)) {
        fm_status status = FM_OK;
        fm_config* cfg = make_config(opts, status);
        if (!cfg) return fail(status);
        std::vector<const char*> paths;
        for (const std::string& t : traces) paths.push_back(t.c_str());
        char* summary = nullptr;
        const std::string outdir = opts.outdir.empty() ? default_outdir() : opts.outdir;
        status = fm_run_resfit(cfg, paths.data(), paths.size(), outdir.c_str(), &summary);
        // partial batch failures still come with a summary of what fitted
        if (summary) std::printf("%s", summary);
        fm_string_free(summary);
        fm_config_free(cfg);
        return status == FM_OK ? 0 : fail(status);
    }

    return 0;
}
