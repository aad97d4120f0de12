#include "finmet/config.hpp"

#include <cstdio>
#include <fstream>

#include "finmet/errors.hpp"
#include "finmet/fieldsolver.hpp"
#include "finmet/units.hpp"

namespace finmet {

using nlohmann::json;
using units::Dim;

namespace {

struct Parser {
    bool strict;
    std::vector<std::string>* warnings;

    void check_keys(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) const {
        if (!obj.is_object()) {
            throw config_error("config: \"" + where + "\" must be an object");
        }
        for (const auto& [key, value] : obj.items()) {
            bool known = false;
            for (const char* a : allowed) {
                if (key == a) { known = true; break; }
            }
            if (!known) {
                const std::string msg = "config: unknown key \"" + where + "." + key + "\"";
                if (strict) throw config_error(msg);
                warnings->push_back(msg);
            }
        }
    }

    double qty(const json& obj, const std::string& where, const char* key, Dim dim,
               double fallback) const {
        if (!obj.contains(key)) return fallback;
        return qty_value(obj.at(key), where + "." + key, dim);
    }

    static double qty_value(const json& v, const std::string& context, Dim dim) {
        if (v.is_number()) return v.get<double>();
        if (v.is_string()) return units::parse_quantity(v.get<std::string>(), dim, context);
        throw config_error(context + ": expected a number or \"<value> <unit>\" string");
    }

    std::vector<double> qty_list(const json& obj, const std::string& where, const char* key,
                                 Dim dim) const {
        std::vector<double> out;
        if (!obj.contains(key)) return out;
        const json& arr = obj.at(key);
        if (!arr.is_array()) throw config_error(where + "." + key + ": expected a list");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            out.push_back(qty_value(arr[i], where + "." + key + "[" + std::to_string(i) + "]", dim));
        }
        return out;
    }
};

}  // namespace

const Material& ProjectConfig::material(const std::string& name) const {
    const auto it = materials.find(name);
    if (it == materials.end()) {
        throw config_error("config: material \"" + name + "\" is not defined");
    }
    return it->second;
}

FinGeometry ProjectConfig::require_fin(const std::string& command) const {
    if (!fin) {
        throw config_error(command + ": config missing key \"fin\" (geometry block required)");
    }
    return *fin;
}

std::vector<double> ProjectConfig::dx_schedule_for(const FinGeometry& f) const {
    if (!solver.dx_schedule.empty()) return solver.dx_schedule;
    return {f.thickness / 8.0, f.thickness / 16.0};
}

ProjectConfig default_config() {
    ProjectConfig cfg;
    cfg.materials["silicon"] = Material{"silicon", 11.7, 0.0};
    cfg.materials["nitride"] = Material{"nitride", 7.0, 0.0};
    cfg.materials["vacuum"] = Material{"vacuum", 1.0, 0.0};
    cfg.fin = FinGeometry{};
    // r0 anchors E_J/h near 12.5 GHz at the default junction geometry
    cfg.junction.r0 = 8.0e-24;
    cfg.output_dir = "";
    return cfg;
}

ProjectConfig parse_config(const json& j, bool strict) {
    ProjectConfig cfg = default_config();
    cfg.fin.reset();  // the geometry block must be explicit in file configs
    Parser p{strict, &cfg.warnings};

    p.check_keys(j, "config",
                 {"materials", "fin", "solver", "resonator", "junction", "monte_carlo", "etch",
                  "sweep", "output_dir"});

    if (j.contains("materials")) {
        const json& mats = j.at("materials");
        if (!mats.is_object()) throw config_error("config: \"materials\" must be an object");
        for (const auto& [name, spec] : mats.items()) {
            p.check_keys(spec, "materials." + name, {"eps_r", "loss_tangent"});
            Material m;
            m.name = name;
            m.eps_r = p.qty(spec, "materials." + name, "eps_r", Dim::dimensionless, 1.0);
            m.loss_tangent =
                p.qty(spec, "materials." + name, "loss_tangent", Dim::dimensionless, 0.0);
            m.validate();
            cfg.materials[name] = m;
        }
    }

    if (j.contains("fin")) {
        const json& f = j.at("fin");
        p.check_keys(f, "fin",
                     {"thickness", "height", "length", "metal_thickness", "sidewall_coverage",
                      "nitride_cap", "trench_depth", "pad_extent", "substrate_material",
                      "barrier_material"});
        FinGeometry fin;
        fin.thickness = p.qty(f, "fin", "thickness", Dim::length, fin.thickness);
        fin.height = p.qty(f, "fin", "height", Dim::length, fin.height);
        fin.length = p.qty(f, "fin", "length", Dim::length, fin.length);
        fin.metal_thickness = p.qty(f, "fin", "metal_thickness", Dim::length, fin.metal_thickness);
        fin.sidewall_coverage =
            p.qty(f, "fin", "sidewall_coverage", Dim::dimensionless, fin.sidewall_coverage);
        fin.trench_depth = p.qty(f, "fin", "trench_depth", Dim::length, fin.trench_depth);
        fin.pad_extent = p.qty(f, "fin", "pad_extent", Dim::length, fin.pad_extent);
        if (f.contains("nitride_cap")) {
            const json& cap = f.at("nitride_cap");
            if (cap.is_boolean() && !cap.get<bool>()) {
                fin.nitride_cap.reset();
            } else if (cap.is_null()) {
                fin.nitride_cap.reset();
            } else {
                p.check_keys(cap, "fin.nitride_cap", {"thickness", "eps_r"});
                NitrideCap nc;
                nc.thickness = p.qty(cap, "fin.nitride_cap", "thickness", Dim::length, 100e-9);
                nc.eps_r = p.qty(cap, "fin.nitride_cap", "eps_r", Dim::dimensionless, 7.0);
                fin.nitride_cap = nc;
            }
        }
        fin.validate();
        cfg.fin = fin;
        if (f.contains("substrate_material"))
            cfg.substrate_material = f.at("substrate_material").get<std::string>();
        if (f.contains("barrier_material"))
            cfg.barrier_material = f.at("barrier_material").get<std::string>();
        cfg.material(cfg.substrate_material);
        cfg.material(cfg.barrier_material);
    }

    if (j.contains("solver")) {
        const json& s = j.at("solver");
        p.check_keys(s, "solver",
                     {"dx_schedule", "tolerance", "padding_factor", "boundary", "node_budget"});
        cfg.solver.dx_schedule = p.qty_list(s, "solver", "dx_schedule", Dim::length);
        cfg.solver.tolerance = p.qty(s, "solver", "tolerance", Dim::dimensionless, 1e-8);
        cfg.solver.padding_factor = p.qty(s, "solver", "padding_factor", Dim::dimensionless, 5.0);
        if (s.contains("boundary")) {
            const std::string b = s.at("boundary").get<std::string>();
            if (b == "neumann") cfg.solver.dirichlet_outer = false;
            else if (b == "dirichlet0") cfg.solver.dirichlet_outer = true;
            else throw config_error("solver.boundary: expected \"neumann\" or \"dirichlet0\"");
        }
        if (s.contains("node_budget")) {
            cfg.solver.node_budget = s.at("node_budget").get<std::size_t>();
        }
    }

    if (j.contains("resonator")) {
        const json& r = j.at("resonator");
        p.check_keys(r, "resonator",
                     {"inductance", "base_capacitance", "capacitance_source", "fin_capacitance",
                      "fin_counts"});
        cfg.resonator.inductance =
            p.qty(r, "resonator", "inductance", Dim::inductance, cfg.resonator.inductance);
        cfg.resonator.base_capacitance = p.qty(r, "resonator", "base_capacitance",
                                               Dim::capacitance, cfg.resonator.base_capacitance);
        cfg.resonator.fin_capacitance = p.qty(r, "resonator", "fin_capacitance", Dim::capacitance,
                                              cfg.resonator.fin_capacitance);
        if (r.contains("capacitance_source")) {
            const std::string src = r.at("capacitance_source").get<std::string>();
            if (src != "simulated" && src != "measured") {
                throw config_error(
                    "resonator.capacitance_source: expected \"simulated\" or \"measured\"");
            }
            cfg.resonator.capacitance_source = src;
        }
        if (r.contains("fin_counts")) {
            cfg.resonator.fin_counts = r.at("fin_counts").get<std::vector<int>>();
        }
    }

    if (j.contains("junction")) {
        const json& q = j.at("junction");
        p.check_keys(q, "junction",
                     {"barrier_thickness", "barrier_height", "effective_mass_ratio", "area",
                      "eps_r", "gap", "r0", "temperature", "reference_pad",
                      "compare_barrier_height"});
        JunctionConfig& jc = cfg.junction;
        jc.barrier_thickness =
            p.qty(q, "junction", "barrier_thickness", Dim::length, jc.barrier_thickness);
        jc.barrier_height_ev =
            p.qty(q, "junction", "barrier_height", Dim::energy_ev, jc.barrier_height_ev);
        jc.effective_mass_ratio = p.qty(q, "junction", "effective_mass_ratio", Dim::dimensionless,
                                        jc.effective_mass_ratio);
        jc.area = p.qty(q, "junction", "area", Dim::area, jc.area);
        jc.barrier_eps_r = p.qty(q, "junction", "eps_r", Dim::dimensionless, jc.barrier_eps_r);
        jc.gap_ev = p.qty(q, "junction", "gap", Dim::energy_ev, jc.gap_ev);
        jc.r0 = p.qty(q, "junction", "r0", Dim::resistance_area, jc.r0);
        jc.temperature = p.qty(q, "junction", "temperature", Dim::temperature, jc.temperature);
        jc.compare_barrier_height_ev = p.qty(q, "junction", "compare_barrier_height",
                                             Dim::energy_ev, jc.compare_barrier_height_ev);
        if (q.contains("reference_pad")) {
            const json& pad = q.at("reference_pad");
            if (!pad.is_array() || pad.size() != 2) {
                throw config_error("junction.reference_pad: expected [width, height]");
            }
            jc.reference_pad_w = Parser::qty_value(pad[0], "junction.reference_pad[0]", Dim::length);
            jc.reference_pad_h = Parser::qty_value(pad[1], "junction.reference_pad[1]", Dim::length);
        }
        jc.validate();
    }

    if (j.contains("monte_carlo")) {
        const json& m = j.at("monte_carlo");
        p.check_keys(m, "monte_carlo", {"samples", "seed", "sigma_d", "workers"});
        if (m.contains("samples")) cfg.monte_carlo.samples = m.at("samples").get<int>();
        if (m.contains("seed")) cfg.monte_carlo.seed = m.at("seed").get<std::uint64_t>();
        cfg.monte_carlo.sigma_d =
            p.qty(m, "monte_carlo", "sigma_d", Dim::length, cfg.monte_carlo.sigma_d);
        if (m.contains("workers")) cfg.monte_carlo.workers = m.at("workers").get<int>();
    }

    if (j.contains("etch")) {
        const json& e = j.at("etch");
        p.check_keys(e, "etch",
                     {"process", "initial_thickness", "target_thickness", "oxide_per_cycle",
                      "si_consumption_ratio", "ale_removal_per_side", "minimum_viable"});
        if (e.contains("process")) {
            cfg.etch.process = e.at("process").get<std::string>();
            if (cfg.etch.process != "digital" && cfg.etch.process != "ale") {
                throw config_error("etch.process: expected \"digital\" or \"ale\"");
            }
        }
        cfg.etch.initial_thickness =
            p.qty(e, "etch", "initial_thickness", Dim::length, cfg.etch.initial_thickness);
        cfg.etch.target_thickness =
            p.qty(e, "etch", "target_thickness", Dim::length, cfg.etch.target_thickness);
        cfg.etch.oxide_per_cycle =
            p.qty(e, "etch", "oxide_per_cycle", Dim::length, cfg.etch.oxide_per_cycle);
        cfg.etch.si_consumption_ratio = p.qty(e, "etch", "si_consumption_ratio",
                                              Dim::dimensionless, cfg.etch.si_consumption_ratio);
        cfg.etch.ale_removal_per_side =
            p.qty(e, "etch", "ale_removal_per_side", Dim::length, cfg.etch.ale_removal_per_side);
        cfg.etch.minimum_viable =
            p.qty(e, "etch", "minimum_viable", Dim::length, cfg.etch.minimum_viable);
    }

    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        p.check_keys(s, "sweep", {"barrier_thickness", "area"});
        cfg.sweep.barrier_thickness = p.qty_list(s, "sweep", "barrier_thickness", Dim::length);
        cfg.sweep.area = p.qty_list(s, "sweep", "area", Dim::area);
    }

    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    return cfg;
}

ProjectConfig load_config(const std::string& path, bool strict) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error("config " + path + ": " + e.what());
    }
    return parse_config(j, strict);
}

json ProjectConfig::to_json() const {
    json j;
    for (const auto& [name, m] : materials) {
        j["materials"][name] = {{"eps_r", m.eps_r}, {"loss_tangent", m.loss_tangent}};
    }
    if (fin) {
        j["fin"] = {{"thickness", fin->thickness},
                    {"height", fin->height},
                    {"length", fin->length},
                    {"metal_thickness", fin->metal_thickness},
                    {"sidewall_coverage", fin->sidewall_coverage},
                    {"trench_depth", fin->trench_depth},
                    {"pad_extent", fin->pad_extent},
                    {"substrate_material", substrate_material},
                    {"barrier_material", barrier_material}};
        if (fin->nitride_cap) {
            j["fin"]["nitride_cap"] = {{"thickness", fin->nitride_cap->thickness},
                                       {"eps_r", fin->nitride_cap->eps_r}};
        } else {
            j["fin"]["nitride_cap"] = false;
        }
    }
    j["solver"] = {{"dx_schedule", solver.dx_schedule},
                   {"tolerance", solver.tolerance},
                   {"padding_factor", solver.padding_factor},
                   {"boundary", solver.dirichlet_outer ? "dirichlet0" : "neumann"},
                   {"node_budget", solver.node_budget}};
    j["resonator"] = {{"inductance", resonator.inductance},
                      {"base_capacitance", resonator.base_capacitance},
                      {"capacitance_source", resonator.capacitance_source},
                      {"fin_capacitance", resonator.fin_capacitance},
                      {"fin_counts", resonator.fin_counts}};
    j["junction"] = {{"barrier_thickness", junction.barrier_thickness},
                     {"barrier_height", junction.barrier_height_ev},
                     {"effective_mass_ratio", junction.effective_mass_ratio},
                     {"area", junction.area},
                     {"eps_r", junction.barrier_eps_r},
                     {"gap", junction.gap_ev},
                     {"r0", junction.r0},
                     {"temperature", junction.temperature},
                     {"reference_pad", {junction.reference_pad_w, junction.reference_pad_h}},
                     {"compare_barrier_height", junction.compare_barrier_height_ev}};
    j["monte_carlo"] = {{"samples", monte_carlo.samples},
                        {"seed", monte_carlo.seed},
                        {"sigma_d", monte_carlo.sigma_d},
                        {"workers", monte_carlo.workers}};
    j["etch"] = {{"process", etch.process},
                 {"initial_thickness", etch.initial_thickness},
                 {"target_thickness", etch.target_thickness},
                 {"oxide_per_cycle", etch.oxide_per_cycle},
                 {"si_consumption_ratio", etch.si_consumption_ratio},
                 {"ale_removal_per_side", etch.ale_removal_per_side},
                 {"minimum_viable", etch.minimum_viable}};
    j["sweep"] = {{"barrier_thickness", sweep.barrier_thickness}, {"area", sweep.area}};
    j["output_dir"] = output_dir;
    return j;
}

std::string ProjectConfig::config_hash() const {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(to_json().dump())));
    return buf;
}

}  // namespace finmet
