#ifndef FINMET_COMMANDS_HPP
#define FINMET_COMMANDS_HPP

#include <span>
#include <string>
#include <vector>

#include "finmet/config.hpp"

namespace finmet {

inline constexpr const char* kVersion = "0.1.0";

struct CommandResult {
    std::vector<std::string> outputs;  // paths written
    std::string summary;               // one-paragraph text result
    std::vector<std::string> errors;   // per-item failures in batch commands
};

// Field-solver run over the configured fin: per-grid and extrapolated C/L,
// participations, predicted C_n/C_0 curve.
CommandResult cmd_capacitance(const ProjectConfig& cfg, const std::string& outdir);

// Hanger fits for each trace; series reduction when traces are labeled
// n<k>; loss extraction when the config carries a fin geometry.
CommandResult cmd_resfit(const ProjectConfig& cfg, std::span<const std::string> trace_paths,
                         const std::string& outdir);

// Series reduction of a (n_fins, f_hz) table; pass an empty path to
// synthesize the series from the configured resonator.
CommandResult cmd_series(const ProjectConfig& cfg, const std::string& series_csv,
                         const std::string& outdir);

// Junction design report: transmon parameters, area sensitivity, thickness
// spread Monte Carlo, barrier comparison, footprint reduction.
CommandResult cmd_design(const ProjectConfig& cfg, const std::string& outdir);

CommandResult cmd_etchplan(const ProjectConfig& cfg, const std::string& outdir);

// Design-space sweep over barrier thickness (and optionally area).
CommandResult cmd_sweep(const ProjectConfig& cfg, const std::string& outdir);

}  // namespace finmet

#endif
