#ifndef FINMET_FABPLAN_HPP
#define FINMET_FABPLAN_HPP

#include <vector>

namespace finmet {

// Oxidize-strip thinning schedule toward a target fin thickness. The plan
// never undershoots: the residual is left for a final timed wet etch.
struct EtchPlan {
    double initial_thickness = 0.0;
    double target_thickness = 0.0;
    double oxide_per_cycle = 0.0;
    double si_consumption_ratio = 0.0;
    double per_cycle_removal = 0.0;  // both sides combined
    int cycles = 0;
    double final_thickness = 0.0;
    double residual_trim = 0.0;
    std::vector<double> thickness_after;  // per completed cycle
};

inline constexpr double kMinimumViableThickness = 3e-9;

// fin thickness = mask width - 2 * undercut
double undercut_correction(double mask_width, double undercut_per_side);

EtchPlan digital_etch_plan(double initial_thickness, double target_thickness,
                           double oxide_per_cycle, double si_consumption_ratio,
                           double minimum_viable = kMinimumViableThickness);

// Atomic-layer etching: same schedule arithmetic at a much smaller,
// directly-specified removal per cycle and side (default 0.1 nm).
EtchPlan ale_etch_plan(double initial_thickness, double target_thickness,
                       double removal_per_side = 0.1e-9,
                       double minimum_viable = kMinimumViableThickness);

}  // namespace finmet

#endif
