#ifndef FINMET_CONFIG_HPP
#define FINMET_CONFIG_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "finmet/fabplan.hpp"
#include "finmet/materials.hpp"
#include "finmet/met.hpp"

namespace finmet {

struct SolverConfig {
    std::vector<double> dx_schedule;  // empty: derive [t/8, t/16] from the fin
    double tolerance = 1e-8;
    double padding_factor = 5.0;
    bool dirichlet_outer = false;
    std::size_t node_budget = 20'000'000;
};

struct ResonatorConfig {
    double inductance = 1e-9;          // H
    double base_capacitance = 550e-15;  // F, IDC C_0
    // "simulated": delta C from the field solver; "measured": taken from
    // fin_capacitance below
    std::string capacitance_source = "simulated";
    double fin_capacitance = 180e-15;  // F, used when source == "measured"
    std::vector<int> fin_counts = {0, 1, 2, 3, 4, 5, 6, 7};
};

struct MonteCarloConfig {
    int samples = 10000;
    std::uint64_t seed = 12345;
    double sigma_d = 0.08e-9;  // m
    int workers = 1;
};

struct EtchConfig {
    std::string process = "digital";  // "digital" (oxidize/strip) or "ale"
    double initial_thickness = 80e-9;
    double target_thickness = 8e-9;
    double oxide_per_cycle = 6e-9;
    double si_consumption_ratio = 0.45;
    double ale_removal_per_side = 0.1e-9;
    double minimum_viable = kMinimumViableThickness;
};

struct JunctionConfig : JunctionSpec {
    double reference_pad_w = 200e-6;  // planar-transmon pad for the footprint ratio
    double reference_pad_h = 400e-6;
    double compare_barrier_height_ev = 2.0;  // AlOx-like reference barrier
};

struct SweepConfig {
    std::vector<double> barrier_thickness;  // m
    std::vector<double> area;               // m^2; empty: junction default only
};

struct ProjectConfig {
    std::map<std::string, Material> materials;
    std::optional<FinGeometry> fin;
    std::string substrate_material = "silicon";
    std::string barrier_material = "silicon";
    SolverConfig solver;
    ResonatorConfig resonator;
    JunctionConfig junction;
    MonteCarloConfig monte_carlo;
    EtchConfig etch;
    SweepConfig sweep;
    std::string output_dir;

    // runtime-only (CLI flags), not part of the file schema
    std::set<std::string> formats = {"csv", "svg", "txt"};
    std::vector<std::string> warnings;  // lenient-mode notes

    const Material& material(const std::string& name) const;
    FinGeometry require_fin(const std::string& command) const;
    std::vector<double> dx_schedule_for(const FinGeometry& fin) const;

    nlohmann::json to_json() const;    // canonical form, used for hashing
    std::string config_hash() const;
};

ProjectConfig default_config();
ProjectConfig load_config(const std::string& path, bool strict);
ProjectConfig parse_config(const nlohmann::json& j, bool strict);

}  // namespace finmet

#endif
