#include "finmet/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "finmet/constants.hpp"
#include "finmet/csv.hpp"
#include "finmet/errors.hpp"
#include "finmet/fieldsolver.hpp"
#include "finmet/resonator.hpp"
#include "finmet/svg.hpp"
#include "finmet/touchstone.hpp"

namespace finmet {

namespace fs = std::filesystem;

namespace {

std::string join_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& outdir) {
    std::error_code ec;
    fs::create_directories(outdir, ec);
    if (ec) throw io_error("cannot create output directory " + outdir + ": " + ec.message());
}

void write_run_record(const ProjectConfig& cfg, const std::string& outdir,
                      const CommandResult& result, const std::string& command) {
    nlohmann::json j;
    j["command"] = command;
    j["config_hash"] = cfg.config_hash();
    j["toolkit_version"] = kVersion;
    j["seed"] = cfg.monte_carlo.seed;
    const auto now = std::chrono::system_clock::now();
    j["timestamp_unix"] = std::chrono::duration_cast<std::chrono::seconds>(
                              now.time_since_epoch())
                              .count();
    j["outputs"] = result.outputs;
    std::ofstream out(join_path(outdir, "run_record.json"));
    if (!out) throw io_error("cannot write run record in " + outdir);
    out << j.dump(2) << '\n';
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open " + path + " for writing");
    out << text;
    if (!out) throw io_error("failed writing " + path);
}

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

DiscretizeOptions solver_options(const ProjectConfig& cfg) {
    DiscretizeOptions opt;
    opt.node_budget = cfg.solver.node_budget;
    opt.dirichlet_outer = cfg.solver.dirichlet_outer;
    return opt;
}

struct FinSolve {
    CapacitanceResult cap;
    double delta_c = 0.0;    // F for the configured fin length
    double p_silicon = 0.0;  // fraction of the fin unit cell energy in Si
};

FinSolve solve_configured_fin(const ProjectConfig& cfg, const FinGeometry& fin,
                              const GridObserver& observer = {}) {
    const CrossSection cs =
        build_fin_cross_section(fin, cfg.material(cfg.substrate_material),
                                cfg.material(cfg.barrier_material), cfg.solver.padding_factor);
    const std::vector<double> schedule = cfg.dx_schedule_for(fin);
    FinSolve out;
    out.cap = capacitance_per_length(cs, schedule, cfg.solver.tolerance, solver_options(cfg),
                                     observer);
    out.delta_c = out.cap.c_per_length * fin.length;
    const auto it = out.cap.participation.find(cfg.barrier_material);
    out.p_silicon = it == out.cap.participation.end() ? 0.0 : it->second;
    if (cfg.substrate_material != cfg.barrier_material) {
        const auto sub = out.cap.participation.find(cfg.substrate_material);
        if (sub != out.cap.participation.end()) out.p_silicon += sub->second;
    }
    return out;
}

}  // namespace

CommandResult cmd_capacitance(const ProjectConfig& cfg, const std::string& outdir) {
    const FinGeometry fin = cfg.require_fin("capacitance");
    ensure_dir(outdir);
    CommandResult result;

    GridObserver observer;
    if (cfg.formats.count("csv")) {
        observer = [&](std::size_t k, const Grid2D& grid, const PotentialField& field) {
            const std::string tag = std::to_string(k);
            const std::string conv = join_path(outdir, "convergence_" + tag + ".csv");
            write_convergence_csv(field, conv);
            result.outputs.push_back(conv);
            // keep snapshots to roughly 250x250 samples
            const int stride = (std::max(grid.nx, grid.ny) + 249) / 250;
            const std::string snap = join_path(outdir, "field_" + tag + ".csv");
            write_field_csv(grid, field, snap, stride);
            result.outputs.push_back(snap);
        };
    }
    const FinSolve solve = solve_configured_fin(cfg, fin, observer);
    const CapacitanceResult& cap = solve.cap;

    if (cfg.formats.count("csv")) {
        const std::string path = join_path(outdir, "capacitance.csv");
        csv::Writer w(path, {"geometry_hash", "dx_m", "c_energy_f_per_m", "c_charge_f_per_m",
                             "extrapolated_f_per_m"});
        for (const CapacitanceEntry& e : cap.per_grid) {
            w.row({cap.geometry_hash, e.dx, e.c_energy, e.c_charge, cap.c_per_length});
        }
        w.close();
        result.outputs.push_back(path);

        const std::string ppath = join_path(outdir, "participation.csv");
        csv::Writer wp(ppath, {"material", "participation"});
        for (const auto& [name, p] : cap.participation) wp.row({name, p});
        wp.close();
        result.outputs.push_back(ppath);
    }

    // predicted frequency and capacitance-ratio curve vs fin count
    const double c0 = cfg.resonator.base_capacitance;
    const double dc = cfg.resonator.capacitance_source == "measured"
                          ? cfg.resonator.fin_capacitance
                          : solve.delta_c;
    LEResonator res{cfg.resonator.inductance, c0, 0, dc};
    const std::vector<double> f_pred = predict_series(res, cfg.resonator.fin_counts);
    std::vector<double> ns, ratios;
    for (std::size_t k = 0; k < f_pred.size(); ++k) {
        ns.push_back(cfg.resonator.fin_counts[k]);
        ratios.push_back(capacitance_ratio(f_pred[0], f_pred[k]).value);
    }
    if (cfg.formats.count("csv")) {
        const std::string path = join_path(outdir, "cn_ratio.csv");
        csv::Writer w(path, {"n_fins", "f_pred_hz", "c_ratio"});
        for (std::size_t k = 0; k < ns.size(); ++k) {
            w.row({static_cast<long>(cfg.resonator.fin_counts[k]), f_pred[k], ratios[k]});
        }
        w.close();
        result.outputs.push_back(path);
    }
    if (cfg.formats.count("svg")) {
        svg::Plot plot("Capacitance ratio vs fin count", "number of fins", "C_n/C_0");
        plot.add_line(ns, ratios, "predicted");
        plot.add_scatter(ns, ratios);
        const std::string path = join_path(outdir, "cn_ratio.svg");
        plot.write(path);
        result.outputs.push_back(path);
    }

    std::ostringstream s;
    s << "C/L extrapolated: " << fmt("%.4g", cap.c_per_length * 1e9) << " fF/um ("
      << cap.per_grid.size() << " grids, method gap "
      << fmt("%.2f", cap.method_gap * 100.0) << "%)\n";
    s << "fin capacitance at " << fmt("%.4g", fin.length * 1e6)
      << " um: " << fmt("%.4g", solve.delta_c * 1e15) << " fF\n";
    s << "silicon participation of the fin cell: " << fmt("%.4f", solve.p_silicon) << "\n";
    result.summary = s.str();
    if (cfg.formats.count("txt")) {
        const std::string path = join_path(outdir, "capacitance.txt");
        write_text(path, result.summary);
        result.outputs.push_back(path);
    }
    write_run_record(cfg, outdir, result, "capacitance");
    return result;
}

namespace {

// fin count from a trace filename, e.g. die3_n5.s2p -> 5
std::optional<int> fin_count_label(const std::string& path) {
    const std::string stem = fs::path(path).stem().string();
    static const std::regex re("(?:^|[_\\-])n(\\d+)(?:$|[_\\-.])");
    std::smatch m;
    if (std::regex_search(stem, m, re)) return std::stoi(m[1]);
    return std::nullopt;
}

}  // namespace

CommandResult cmd_resfit(const ProjectConfig& cfg, std::span<const std::string> trace_paths,
                         const std::string& outdir) {
    if (trace_paths.empty()) {
        throw config_error("resfit: no trace files given");
    }
    ensure_dir(outdir);
    CommandResult result;

    struct FitRow {
        std::string file;
        std::optional<int> n_fins;
        HangerFit fit;
    };
    std::vector<FitRow> rows;
    for (const std::string& path : trace_paths) {
        try {
            const S21Trace trace = read_trace(path);
            FitRow row{path, fin_count_label(path), fit_hanger(trace)};
            rows.push_back(std::move(row));
        } catch (const error& e) {
            result.errors.push_back(path + ": " + e.what());
        }
    }
    if (rows.empty()) {
        throw io_error("resfit: no trace could be fitted (" +
                       (result.errors.empty() ? std::string("no inputs") : result.errors.front()) +
                       ")");
    }

    if (cfg.formats.count("csv")) {
        const std::string path = join_path(outdir, "resfit.csv");
        csv::Writer w(path, {"file", "n_fins", "f_r_hz", "q_i", "q_c", "phi_rad", "amplitude",
                             "phase_rad", "delay_s", "sigma_f_r", "sigma_q_i", "sigma_q_c",
                             "sigma_phi", "sigma_amplitude", "sigma_phase", "sigma_delay",
                             "rms_residual"});
        for (const FitRow& r : rows) {
            w.row({fs::path(r.file).filename().string(),
                   r.n_fins ? static_cast<long>(*r.n_fins) : static_cast<long>(-1), r.fit.f_r,
                   r.fit.q_i, r.fit.q_c, r.fit.phi, r.fit.background.amplitude,
                   r.fit.background.phase, r.fit.background.delay, r.fit.sigma[0], r.fit.sigma[1],
                   r.fit.sigma[2], r.fit.sigma[3], r.fit.sigma[4], r.fit.sigma[5], r.fit.sigma[6],
                   r.fit.residual});
        }
        w.close();
        result.outputs.push_back(path);
    }

    if (cfg.formats.count("svg")) {
        // model-vs-data magnitude plot for the first fitted trace
        const FitRow& r = rows.front();
        const S21Trace trace = read_trace(r.file);
        std::vector<double> f_ghz, data_db, model_db;
        for (std::size_t i = 0; i < trace.f_hz.size(); ++i) {
            f_ghz.push_back(trace.f_hz[i] * 1e-9);
            data_db.push_back(20.0 * std::log10(std::abs(trace.s21[i])));
            model_db.push_back(20.0 * std::log10(std::abs(hanger_s21(r.fit, trace.f_hz[i]))));
        }
        svg::Plot plot("Hanger fit: " + fs::path(r.file).filename().string(), "frequency (GHz)",
                       "|S21| (dB)");
        plot.add_scatter(f_ghz, data_db, "data");
        plot.add_line(f_ghz, model_db, "model");
        const std::string path = join_path(outdir, "resfit_trace.svg");
        plot.write(path);
        result.outputs.push_back(path);
    }

    std::ostringstream s;
    s << rows.size() << " trace(s) fitted";
    if (!result.errors.empty()) s << ", " << result.errors.size() << " failed";
    s << "\n";
    for (const FitRow& r : rows) {
        s << "  " << fs::path(r.file).filename().string() << ": f_r = "
          << fmt("%.6f", r.fit.f_r * 1e-9) << " GHz, Q_i = " << fmt("%.4g", r.fit.q_i)
          << ", Q_c = " << fmt("%.4g", r.fit.q_c)
          << (r.fit.bound_hit_warning ? " (warning: parameter bound hit)" : "") << "\n";
    }

    // series reduction across traces labeled by fin count
    bool all_labeled = rows.size() >= 3;
    for (const FitRow& r : rows) all_labeled = all_labeled && r.n_fins.has_value();
    bool has_zero = false;
    for (const FitRow& r : rows) has_zero = has_zero || (r.n_fins && *r.n_fins == 0);
    if (all_labeled && has_zero) {
        std::vector<SeriesEntry> entries;
        for (const FitRow& r : rows) entries.push_back({*r.n_fins, r.fit.f_r});
        const ResonatorSeries series = fit_series(entries);
        if (cfg.formats.count("csv")) {
            const std::string path = join_path(outdir, "series.csv");
            csv::Writer w(path, {"n_fins", "f_hz", "c_ratio"});
            for (std::size_t k = 0; k < series.entries.size(); ++k) {
                w.row({static_cast<long>(series.entries[k].n_fins), series.entries[k].f_hz,
                       series.ratios[k]});
            }
            w.close();
            result.outputs.push_back(path);
        }
        s << "series slope dC/C0 = " << fmt("%.6g", series.slope) << " +- "
          << fmt("%.2g", series.slope_stderr) << " (R^2 = " << fmt("%.6f", series.r_squared)
          << ")\n";

        // loss extraction when the geometry (hence participations) is known
        if (cfg.fin && rows.size() >= 2) {
            const FinSolve solve = solve_configured_fin(cfg, *cfg.fin);
            const double dc = cfg.resonator.capacitance_source == "measured"
                                  ? cfg.resonator.fin_capacitance
                                  : solve.delta_c;
            std::vector<DeviceLoss> devices;
            for (const FitRow& r : rows) {
                if (*r.n_fins == 0) continue;  // no fin participation to separate
                const double ctot = cfg.resonator.base_capacitance + *r.n_fins * dc;
                const double p_fin = *r.n_fins * dc * solve.p_silicon / ctot;
                devices.push_back({r.fit.q_i, p_fin, 1.0 - p_fin});
            }
            if (devices.size() >= 2) {
                const LossBudget budget = extract_fin_loss(devices);
                if (cfg.formats.count("csv")) {
                    const std::string path = join_path(outdir, "loss_budget.csv");
                    csv::Writer w(path, {"tan_fin", "tan_rest", "residual_rms"});
                    w.row({budget.tan_fin, budget.tan_rest, budget.residual_rms});
                    w.close();
                    result.outputs.push_back(path);
                }
                s << "loss extraction: tan(fin) = " << fmt("%.3g", budget.tan_fin)
                  << ", tan(rest) = " << fmt("%.3g", budget.tan_rest) << "\n";
            }
        }
    }

    result.summary = s.str();
    if (cfg.formats.count("txt")) {
        const std::string path = join_path(outdir, "resfit.txt");
        write_text(path, result.summary);
        result.outputs.push_back(path);
    }
    write_run_record(cfg, outdir, result, "resfit");
    return result;
}

CommandResult cmd_series(const ProjectConfig& cfg, const std::string& series_csv,
                         const std::string& outdir) {
    ensure_dir(outdir);
    CommandResult result;

    std::vector<SeriesEntry> entries;
    if (series_csv.empty() || series_csv == "-") {
        const double dc = cfg.resonator.fin_capacitance;
        LEResonator res{cfg.resonator.inductance, cfg.resonator.base_capacitance, 0, dc};
        const std::vector<double> f = predict_series(res, cfg.resonator.fin_counts);
        for (std::size_t k = 0; k < f.size(); ++k) {
            entries.push_back({cfg.resonator.fin_counts[k], f[k]});
        }
    } else {
        const csv::Table t = csv::read(series_csv);
        const std::size_t cn = t.column("n_fins");
        const std::size_t cf = t.column("f_hz");
        for (const auto& row : t.rows) {
            entries.push_back({static_cast<int>(csv::to_double(row[cn], series_csv)),
                               csv::to_double(row[cf], series_csv)});
        }
    }
    const ResonatorSeries series = fit_series(entries);

    if (cfg.formats.count("csv")) {
        const std::string path = join_path(outdir, "series.csv");
        csv::Writer w(path, {"n_fins", "f_hz", "c_ratio"});
        for (std::size_t k = 0; k < series.entries.size(); ++k) {
            w.row({static_cast<long>(series.entries[k].n_fins), series.entries[k].f_hz,
                   series.ratios[k]});
        }
        w.close();
        result.outputs.push_back(path);

        const std::string fpath = join_path(outdir, "series_fit.csv");
        csv::Writer wf(fpath, {"slope", "slope_stderr", "r_squared", "intercept",
                               "intercept_constrained"});
        wf.row({series.slope, series.slope_stderr, series.r_squared, series.intercept,
                static_cast<long>(series.intercept_constrained ? 1 : 0)});
        wf.close();
        result.outputs.push_back(fpath);
    }
    if (cfg.formats.count("svg")) {
        std::vector<double> ns, rs, fit_y;
        for (std::size_t k = 0; k < series.entries.size(); ++k) {
            ns.push_back(series.entries[k].n_fins);
            rs.push_back(series.ratios[k]);
            fit_y.push_back(series.intercept + series.slope * series.entries[k].n_fins);
        }
        svg::Plot plot("Capacitance ratio vs fin count", "number of fins", "C_n/C_0");
        plot.add_scatter(ns, rs, "data");
        plot.add_line(ns, fit_y, "fit");
        const std::string path = join_path(outdir, "series.svg");
        plot.write(path);
        result.outputs.push_back(path);
    }

    std::ostringstream s;
    s << "slope dC/C0 = " << fmt("%.6g", series.slope) << " +- "
      << fmt("%.2g", series.slope_stderr) << ", R^2 = " << fmt("%.8f", series.r_squared) << "\n";
    if (series.monotonic_warning) {
        s << "warning: some f_n increased with n (fins should only add capacitance)\n";
    }
    result.summary = s.str();
    if (cfg.formats.count("txt")) {
        const std::string path = join_path(outdir, "series.txt");
        write_text(path, result.summary);
        result.outputs.push_back(path);
    }
    write_run_record(cfg, outdir, result, "series");
    return result;
}

CommandResult cmd_design(const ProjectConfig& cfg, const std::string& outdir) {
    ensure_dir(outdir);
    CommandResult result;
    const JunctionConfig& spec = cfg.junction;
    spec.validate();

    const double c = junction_capacitance(spec);
    const double e_c = charging_energy(c);
    const double rn = normal_resistance(spec);
    const double ic = critical_current(spec);
    const double e_j = josephson_energy(ic);
    const TransmonParams params = design_params(spec);
    const double sens = params.ratio >= 20.0 ? area_sensitivity(spec) : 0.0;

    const SpreadReport spread = frequency_spread(spec, cfg.monte_carlo.sigma_d,
                                                 cfg.monte_carlo.samples, cfg.monte_carlo.seed,
                                                 cfg.monte_carlo.workers);
    JunctionSpec alt = spec;
    alt.barrier_height_ev = spec.compare_barrier_height_ev;
    // recalibrate r0 so the reference barrier hits the same R_n at the
    // nominal thickness; the comparison is between equally-targeted designs
    const double kappa_base = wkb_kappa(spec.barrier_height_ev, spec.effective_mass_ratio);
    const double kappa_alt = wkb_kappa(alt.barrier_height_ev, alt.effective_mass_ratio);
    alt.r0 = spec.r0 * std::exp(2.0 * (kappa_base - kappa_alt) * spec.barrier_thickness);
    const BarrierComparison cmp = compare_barriers(spec, alt, cfg.monte_carlo.sigma_d,
                                                   cfg.monte_carlo.samples, cfg.monte_carlo.seed);
    const double footprint_reduction =
        spec.reference_pad_w * spec.reference_pad_h / spec.area;

    using phys::planck_h;
    if (cfg.formats.count("csv")) {
        const std::string path = join_path(outdir, "design.csv");
        csv::Writer w(path,
                      {"d_m", "phi_b_ev", "area_m2", "c_f", "r_n_ohm", "i_c_a", "e_j_hz",
                       "e_c_hz", "ej_over_ec", "f01_hz", "anharmonicity_hz",
                       "charge_dispersion_hz", "area_sensitivity", "mc_rel_spread",
                       "analytic_rel_spread", "barrier_ratio_analytic", "barrier_ratio_mc",
                       "footprint_reduction"});
        w.row({spec.barrier_thickness, spec.barrier_height_ev, spec.area, c, rn, ic,
               e_j / planck_h, e_c / planck_h, params.ratio, params.f01, params.anharmonicity,
               params.charge_dispersion_01, sens, spread.rel_spread, spread.analytic_rel_spread,
               cmp.analytic_ratio, cmp.mc_ratio, footprint_reduction});
        w.close();
        result.outputs.push_back(path);

        const std::string spath = join_path(outdir, "spread.csv");
        csv::Writer ws(spath, {"sigma_d_m", "samples", "seed", "mean_f01_hz", "sigma_f01_hz",
                               "rel_spread", "analytic_rel_spread", "kappa_per_m", "q05_hz",
                               "q25_hz", "q50_hz", "q75_hz", "q95_hz"});
        ws.row({spread.sigma_d, static_cast<long>(spread.samples),
                static_cast<long>(spread.seed), spread.mean_f01, spread.sigma_f01,
                spread.rel_spread, spread.analytic_rel_spread, spread.kappa, spread.quantiles[0],
                spread.quantiles[1], spread.quantiles[2], spread.quantiles[3],
                spread.quantiles[4]});
        ws.close();
        result.outputs.push_back(spath);
    }

    std::ostringstream s;
    s << "junction: d = " << fmt("%.4g", spec.barrier_thickness * 1e9) << " nm, phi_b = "
      << fmt("%.4g", spec.barrier_height_ev) << " eV, A = " << fmt("%.4g", spec.area * 1e12)
      << " um^2\n";
    s << "C = " << fmt("%.4g", c * 1e15) << " fF, R_n = " << fmt("%.4g", rn) << " ohm, I_c = "
      << fmt("%.4g", ic * 1e9) << " nA\n";
    s << "E_J/h = " << fmt("%.4g", e_j / planck_h * 1e-9) << " GHz, E_C/h = "
      << fmt("%.4g", e_c / planck_h * 1e-6) << " MHz, E_J/E_C = " << fmt("%.4g", params.ratio)
      << (params.transmon_regime ? " (transmon regime)\n" : " (OUT OF TRANSMON REGIME)\n");
    s << "f01 = " << fmt("%.6g", params.f01 * 1e-9) << " GHz, anharmonicity = "
      << fmt("%.4g", params.anharmonicity * 1e-6) << " MHz, charge dispersion = "
      << fmt("%.4g", params.charge_dispersion_01 * 1e-3) << " kHz\n";
    s << "d ln f01 / d ln A = " << fmt("%.4g", sens)
      << " (capacitive and inductive contributions cancel to first order)\n";
    s << "thickness spread: sigma_f/f = " << fmt("%.4g", spread.rel_spread) << " MC vs "
      << fmt("%.4g", spread.analytic_rel_spread) << " analytic (kappa sigma_d)\n";
    s << "barrier comparison at phi_b = " << fmt("%.3g", spec.compare_barrier_height_ev)
      << " eV: spread ratio " << fmt("%.4g", cmp.analytic_ratio) << " analytic, "
      << fmt("%.4g", cmp.mc_ratio) << " MC\n";
    s << "footprint: " << fmt("%.4g", footprint_reduction)
      << "x smaller than the reference pad ("
      << fmt("%.0f", spec.reference_pad_w * 1e6) << " x "
      << fmt("%.0f", spec.reference_pad_h * 1e6) << " um^2)\n";
    if (spread.truncation_warning) {
        s << "warning: sigma_d >= d/3, truncation bias is material\n";
    }
    result.summary = s.str();
    if (cfg.formats.count("txt")) {
        const std::string path = join_path(outdir, "design.txt");
        write_text(path, result.summary);
        result.outputs.push_back(path);
    }
    write_run_record(cfg, outdir, result, "design");
    return result;
}

CommandResult cmd_etchplan(const ProjectConfig& cfg, const std::string& outdir) {
    ensure_dir(outdir);
    CommandResult result;
    const EtchConfig& e = cfg.etch;
    const EtchPlan plan =
        e.process == "ale"
            ? ale_etch_plan(e.initial_thickness, e.target_thickness, e.ale_removal_per_side,
                            e.minimum_viable)
            : digital_etch_plan(e.initial_thickness, e.target_thickness, e.oxide_per_cycle,
                                e.si_consumption_ratio, e.minimum_viable);

    if (cfg.formats.count("csv")) {
        const std::string path = join_path(outdir, "etchplan.csv");
        csv::Writer w(path, {"cycle", "thickness_after_m"});
        w.row({static_cast<long>(0), plan.initial_thickness});
        for (std::size_t k = 0; k < plan.thickness_after.size(); ++k) {
            w.row({static_cast<long>(k + 1), plan.thickness_after[k]});
        }
        w.close();
        result.outputs.push_back(path);
    }

    std::ostringstream s;
    s << (e.process == "ale" ? "ALE" : "digital etch") << " plan: "
      << fmt("%.4g", plan.initial_thickness * 1e9) << " nm -> target "
      << fmt("%.4g", plan.target_thickness * 1e9) << " nm\n";
    if (e.process == "ale") {
        s << "per cycle: Si removed " << fmt("%.3g", plan.per_cycle_removal * 1e9)
          << " nm total (both sides)\n";
    } else {
        s << "per cycle: " << fmt("%.3g", plan.oxide_per_cycle * 1e9) << " nm oxide, Si consumed "
          << fmt("%.3g", plan.per_cycle_removal * 1e9) << " nm total (both sides)\n";
    }
    s << "cycles: " << plan.cycles << ", thickness after: "
      << fmt("%.4g", plan.final_thickness * 1e9) << " nm\n";
    s << "residual for the final timed wet etch: " << fmt("%.4g", plan.residual_trim * 1e9)
      << " nm\n";
    result.summary = s.str();
    if (cfg.formats.count("txt")) {
        const std::string path = join_path(outdir, "etchplan.txt");
        write_text(path, result.summary);
        result.outputs.push_back(path);
    }
    write_run_record(cfg, outdir, result, "etchplan");
    return result;
}

CommandResult cmd_sweep(const ProjectConfig& cfg, const std::string& outdir) {
    ensure_dir(outdir);
    CommandResult result;

    std::vector<double> thicknesses = cfg.sweep.barrier_thickness;
    if (thicknesses.empty()) {
        for (double nm : {5.0, 6.0, 7.0, 8.0, 9.0, 10.0}) thicknesses.push_back(nm * 1e-9);
    }
    std::vector<double> areas = cfg.sweep.area;
    if (areas.empty()) areas.push_back(cfg.junction.area);

    using phys::planck_h;
    const std::string path = join_path(outdir, "sweep.csv");
    csv::Writer w(path, {"d_m", "phi_b_ev", "area_m2", "e_j_hz", "e_c_hz", "f01_hz",
                         "anharmonicity_hz", "charge_dispersion_hz", "rel_spread"});
    std::size_t rows = 0;
    for (double a : areas) {
        for (double d : thicknesses) {
            JunctionSpec spec = cfg.junction;
            spec.barrier_thickness = d;
            spec.area = a;
            const double e_c = charging_energy(junction_capacitance(spec));
            const double e_j = josephson_energy(critical_current(spec));
            const TransmonParams p = design_params(spec);
            const double kappa = wkb_kappa(spec.barrier_height_ev, spec.effective_mass_ratio);
            w.row({d, spec.barrier_height_ev, a, e_j / planck_h, e_c / planck_h, p.f01,
                   p.anharmonicity, p.charge_dispersion_01, kappa * cfg.monte_carlo.sigma_d});
            ++rows;
        }
    }
    w.close();
    result.outputs.push_back(path);

    std::ostringstream s;
    s << "sweep: " << rows << " design points -> " << path << "\n";
    result.summary = s.str();
    write_run_record(cfg, outdir, result, "sweep");
    return result;
}

}  // namespace finmet
