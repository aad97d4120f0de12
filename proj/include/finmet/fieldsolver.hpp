#ifndef FINMET_FIELDSOLVER_HPP
#define FINMET_FIELDSOLVER_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "finmet/materials.hpp"

namespace finmet {

struct DiscretizeOptions {
    std::size_t node_budget = 20'000'000;
    bool dirichlet_outer = false;  // default: reflecting (zero normal field)
};

// Regular cell-centered grid. "Nodes" are the solver unknowns, one per cell,
// located at cell centers. eps is the relative permittivity sampled at the
// cell center; fixed cells carry an electrode potential.
struct Grid2D {
    int nx = 0, ny = 0;        // cell counts
    double dx = 0.0, dy = 0.0;  // meters
    double x0 = 0.0, y0 = 0.0;  // grid origin (lower-left corner)
    std::vector<double> eps;          // nx*ny
    std::vector<std::uint8_t> fixed;  // 0 = free, else 1 + electrode index
    std::vector<double> fixed_value;  // volts, valid where fixed != 0
    std::vector<std::uint16_t> material;   // index into material_names
    std::vector<std::string> material_names;
    std::vector<std::string> electrode_labels;
    std::vector<double> electrode_potentials;
    bool dirichlet_outer = false;

    std::size_t cells() const { return static_cast<std::size_t>(nx) * ny; }
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    double cx(int i) const { return x0 + (i + 0.5) * dx; }
    double cy(int j) const { return y0 + (j + 0.5) * dy; }
};

struct SolveOptions {
    // iteration cap in fine-grid sweep equivalents
    double max_sweeps = 1'000'000.0;
    // optional warm start (one value per cell); the convergence criterion
    // stays referenced to the cold-start residual
    std::vector<double> initial_phi;
};

struct PotentialField {
    const Grid2D* grid = nullptr;
    std::vector<double> phi;  // volts, per cell; pinned at fixed cells
    double residual = 0.0;    // relative residual achieved
    long iterations = 0;      // preconditioned CG iterations
    std::vector<double> residual_history;
};

struct CapacitanceEntry {
    double dx = 0.0;
    double c_energy = 0.0;  // F/m from the field-energy quadrature
    double c_charge = 0.0;  // F/m from the electrode-flux integral
};

enum class CapacitanceMethod { energy, charge };

struct CapacitanceResult {
    double c_per_length = 0.0;  // F/m, Richardson-extrapolated
    std::vector<CapacitanceEntry> per_grid;
    CapacitanceMethod method = CapacitanceMethod::charge;
    double method_gap = 0.0;  // |energy-charge|/charge on the finest grid
    // fraction of field energy per material, finest grid, conductors excluded
    std::map<std::string, double> participation;
    std::string geometry_hash;  // FNV-1a of the serialized cross-section
};

// Samples the cross-section onto a uniform grid with spacing <= target_dx.
// Cell boundaries are aligned to the cross-section's align_x/align_y
// interface coordinates when present (the grid may then overhang the
// bounding box by less than one cell; material sampling clamps).
Grid2D discretize(const CrossSection& cs, double target_dx, const DiscretizeOptions& opt = {});

// Solves div(eps grad phi) = 0 with fixed electrode potentials by conjugate
// gradients preconditioned with a geometric multigrid V-cycle. Deterministic
// for fixed inputs.
PotentialField solve_laplace(const Grid2D& grid, double tol, const SolveOptions& opt = {});

// Electrode charge per unit length divided by eps0 (dimensionless * V).
// Returns the summed flux for electrodes at positive and negative potential.
struct ElectrodeCharges {
    double positive = 0.0;
    double negative = 0.0;
};
ElectrodeCharges electrode_charges(const Grid2D& grid, const PotentialField& field);

// Called once per solved grid (schedule index, grid, field); used for
// snapshot and convergence-log emission without retaining the full fields.
using GridObserver =
    std::function<void(std::size_t, const Grid2D&, const PotentialField&)>;

// Capacitance per unit length for a two-terminal cross-section driven at
// +-0.5 V, computed on every grid of the schedule by the energy and charge
// routes and Richardson-extrapolated from the two finest grids.
CapacitanceResult capacitance_per_length(const CrossSection& cs,
                                         std::span<const double> dx_schedule, double tol = 1e-8,
                                         const DiscretizeOptions& opt = {},
                                         const GridObserver& observer = {});

// 2D extrusion model: C = (C/L) * fin_length.
double fin_capacitance(const CrossSection& cs, double fin_length,
                       std::span<const double> dx_schedule, double tol = 1e-8,
                       const DiscretizeOptions& opt = {});

// Closed-form parallel-plate capacitance per unit length.
double parallel_plate_c_per_length(double eps_r, double plate_height, double separation);

// Fringe-free parallel-plate cross-section: the box closes at the plates.
CrossSection make_parallel_plate_cross_section(double eps_r, double separation,
                                               double plate_height, double plate_thickness);

// Bilinear interpolation of a per-cell field at a physical point.
double sample_field(const Grid2D& grid, const std::vector<double>& phi, double x, double y);

// Field snapshot as CSV rows (x, y, phi, eps); stride subsamples the grid
// (1 = every cell).
void write_field_csv(const Grid2D& grid, const PotentialField& field, const std::string& path,
                     int stride = 1);

// Per-iteration relative residuals.
void write_convergence_csv(const PotentialField& field, const std::string& path);

std::uint64_t fnv1a64(const std::string& data);

}  // namespace finmet

#endif
