#include "finmet/fabplan.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "finmet/errors.hpp"

namespace finmet {

double undercut_correction(double mask_width, double undercut_per_side) {
    if (!(mask_width > 0.0)) throw domain_error("undercut_correction: mask width must be > 0");
    if (undercut_per_side < 0.0) {
        throw domain_error("undercut_correction: undercut must be >= 0");
    }
    if (!(mask_width > 2.0 * undercut_per_side)) {
        throw domain_error("undercut_correction: mask of " + std::to_string(mask_width) +
                           " m is fully consumed by " + std::to_string(undercut_per_side) +
                           " m/side undercut; infeasible mask");
    }
    return mask_width - 2.0 * undercut_per_side;
}

namespace {

EtchPlan schedule_plan(EtchPlan plan, double minimum_viable, const char* what) {
    const double initial_thickness = plan.initial_thickness;
    const double target_thickness = plan.target_thickness;
    if (!(target_thickness >= minimum_viable)) {
        throw domain_error(std::string(what) + ": target below the minimum viable thickness of " +
                           std::to_string(minimum_viable) + " m");
    }
    if (!(initial_thickness > target_thickness)) {
        throw domain_error(std::string(what) + ": initial thickness must exceed the target");
    }

    const double budget = initial_thickness - target_thickness;
    // rounding slack of ~1e-9 relative: an exact-division schedule is taken
    // as exact instead of losing a cycle to the last ulp
    const double slack = 1e-9 * initial_thickness;
    long n = static_cast<long>(std::floor((budget + slack) / plan.per_cycle_removal));
    if (n < 0) n = 0;
    while (n > 0 && initial_thickness - n * plan.per_cycle_removal < target_thickness - slack) --n;
    while (initial_thickness - (n + 1) * plan.per_cycle_removal >= target_thickness) ++n;

    plan.cycles = static_cast<int>(n);
    plan.final_thickness =
        std::max(initial_thickness - n * plan.per_cycle_removal, target_thickness);
    plan.residual_trim = plan.final_thickness - target_thickness;
    plan.thickness_after.reserve(plan.cycles);
    for (long k = 1; k <= n; ++k) {
        plan.thickness_after.push_back(initial_thickness - k * plan.per_cycle_removal);
    }
    if (!plan.thickness_after.empty()) plan.thickness_after.back() = plan.final_thickness;
    return plan;
}

}  // namespace

EtchPlan digital_etch_plan(double initial_thickness, double target_thickness,
                           double oxide_per_cycle, double si_consumption_ratio,
                           double minimum_viable) {
    if (!(oxide_per_cycle >= 1e-9 && oxide_per_cycle <= 10e-9)) {
        throw domain_error("digital_etch_plan: oxide_per_cycle must be in [1, 10] nm");
    }
    if (!(si_consumption_ratio > 0.0 && si_consumption_ratio <= 1.0)) {
        throw domain_error("digital_etch_plan: si_consumption_ratio must be in (0, 1]");
    }
    EtchPlan plan;
    plan.initial_thickness = initial_thickness;
    plan.target_thickness = target_thickness;
    plan.oxide_per_cycle = oxide_per_cycle;
    plan.si_consumption_ratio = si_consumption_ratio;
    plan.per_cycle_removal = 2.0 * si_consumption_ratio * oxide_per_cycle;
    return schedule_plan(std::move(plan), minimum_viable, "digital_etch_plan");
}

EtchPlan ale_etch_plan(double initial_thickness, double target_thickness,
                       double removal_per_side, double minimum_viable) {
    if (!(removal_per_side >= 0.01e-9 && removal_per_side <= 1e-9)) {
        throw domain_error("ale_etch_plan: removal per side must be in [0.01, 1] nm per cycle");
    }
    EtchPlan plan;
    plan.initial_thickness = initial_thickness;
    plan.target_thickness = target_thickness;
    plan.oxide_per_cycle = 0.0;
    plan.si_consumption_ratio = 1.0;
    plan.per_cycle_removal = 2.0 * removal_per_side;
    return schedule_plan(std::move(plan), minimum_viable, "ale_etch_plan");
}

}  // namespace finmet
