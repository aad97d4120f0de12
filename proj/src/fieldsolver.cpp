#include "finmet/fieldsolver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "finmet/constants.hpp"
#include "finmet/csv.hpp"
#include "finmet/errors.hpp"

namespace finmet {

namespace {

// Grid spacing and extent along one axis. When interface coordinates are
// present the spacing divides their span exactly, so material boundaries at
// those coordinates fall on cell boundaries instead of being staircased by
// up to half a cell.
struct Axis {
    double origin;
    double h;  // spacing
    int n;     // cell count
};

Axis make_axis(double lo, double hi, double target, const std::vector<double>& align) {
    Axis ax{};
    if (align.size() >= 2) {
        auto [mn_it, mx_it] = std::minmax_element(align.begin(), align.end());
        const double span = *mx_it - *mn_it;
        if (span > 0.0) {
            const int k = std::max(1, static_cast<int>(std::ceil(span / target - 1e-9)));
            ax.h = span / k;
            const long left =
                std::max(0L, std::lround(std::ceil((*mn_it - lo) / ax.h - 1e-9)));
            const long right =
                std::max(0L, std::lround(std::ceil((hi - *mx_it) / ax.h - 1e-9)));
            ax.origin = *mn_it - left * ax.h;
            ax.n = static_cast<int>(left + k + right);
            return ax;
        }
    }
    ax.n = std::max(1, static_cast<int>(std::ceil((hi - lo) / target - 1e-9)));
    ax.h = (hi - lo) / ax.n;
    ax.origin = lo;
    return ax;
}

inline double harmonic(double a, double b) { return 2.0 * a * b / (a + b); }

// Assembled 5-point operator at one resolution. Face conductances absorb the
// eps0-free permittivity and the metric factor (dy/dx or dx/dy); Dirichlet
// electrode faces get the half-cell coefficient 2*eps_free since the
// conductor surface sits on the shared face.
struct MgLevel {
    int nx = 0, ny = 0;
    std::vector<double> cx;  // (nx+1)*ny, face between (i-1,j) and (i,j)
    std::vector<double> cy;  // nx*(ny+1), face between (i,j-1) and (i,j)
    std::vector<double> diag;
    std::vector<std::uint8_t> fixed;
    std::vector<double> phi, rhs, res;

    std::size_t cells() const { return static_cast<std::size_t>(nx) * ny; }
    std::size_t id(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    std::size_t fx(int i, int j) const { return static_cast<std::size_t>(j) * (nx + 1) + i; }
    std::size_t fy(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }

    void alloc_work() {
        phi.assign(cells(), 0.0);
        rhs.assign(cells(), 0.0);
        res.assign(cells(), 0.0);
    }

    void build_diag() {
        diag.assign(cells(), 0.0);
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const std::size_t c = id(i, j);
                if (fixed[c]) continue;
                double d = cx[fx(i, j)] + cx[fx(i + 1, j)] + cy[fy(i, j)] + cy[fy(i, j + 1)];
                if (d <= 0.0) {
                    // isolated cell with no conductive faces; pin it
                    fixed[c] = 255;
                    d = 1.0;
                }
                diag[c] = d;
            }
        }
    }

    // out = A*phi on free cells (uses pinned values at fixed neighbors)
    void apply(const std::vector<double>& v, std::vector<double>& out) const {
        for (int j = 0; j < ny; ++j) {
            for (int i = 0; i < nx; ++i) {
                const std::size_t c = id(i, j);
                if (fixed[c]) {
                    out[c] = 0.0;
                    continue;
                }
                double acc = diag[c] * v[c];
                const double kl = cx[fx(i, j)], kr = cx[fx(i + 1, j)];
                const double kb = cy[fy(i, j)], kt = cy[fy(i, j + 1)];
                if (i > 0) acc -= kl * v[c - 1];
                if (i + 1 < nx) acc -= kr * v[c + 1];
                if (j > 0) acc -= kb * v[c - nx];
                if (j + 1 < ny) acc -= kt * v[c + nx];
                out[c] = acc;
            }
        }
    }

    // one red-black half sweep over cells with (i+j)%2 == color
    void smooth(int color) {
        for (int j = 0; j < ny; ++j) {
            int i = (color + j) & 1;
            for (; i < nx; i += 2) {
                const std::size_t c = id(i, j);
                if (fixed[c]) continue;
                double acc = rhs[c];
                if (i > 0) acc += cx[fx(i, j)] * phi[c - 1];
                if (i + 1 < nx) acc += cx[fx(i + 1, j)] * phi[c + 1];
                if (j > 0) acc += cy[fy(i, j)] * phi[c - nx];
                if (j + 1 < ny) acc += cy[fy(i, j + 1)] * phi[c + nx];
                phi[c] = acc / diag[c];
            }
        }
    }

    void residual() {
        apply(phi, res);
        for (std::size_t c = 0; c < cells(); ++c) res[c] = fixed[c] ? 0.0 : rhs[c] - res[c];
    }
};

MgLevel coarsen(const MgLevel& f) {
    MgLevel c;
    c.nx = (f.nx + 1) / 2;
    c.ny = (f.ny + 1) / 2;
    c.cx.assign(static_cast<std::size_t>(c.nx + 1) * c.ny, 0.0);
    c.cy.assign(static_cast<std::size_t>(c.nx) * (c.ny + 1), 0.0);
    c.fixed.assign(c.cells(), 0);
    // rediscretization scaling: a 2D face conductance eps*(dy/dx) is
    // scale-invariant, so the coarse face is the average of the fine faces
    // crossing it (parallel paths over a doubled distance)
    for (int J = 0; J < c.ny; ++J) {
        const int j0 = 2 * J, j1 = std::min(2 * J + 2, f.ny);
        for (int I = 0; I <= c.nx; ++I) {
            const int fi = std::min(2 * I, f.nx);
            double sum = 0.0;
            for (int j = j0; j < j1; ++j) sum += f.cx[f.fx(fi, j)];
            c.cx[c.fx(I, J)] = 0.5 * sum;
        }
    }
    for (int J = 0; J <= c.ny; ++J) {
        const int fj = std::min(2 * J, f.ny);
        for (int I = 0; I < c.nx; ++I) {
            const int i0 = 2 * I, i1 = std::min(2 * I + 2, f.nx);
            double sum = 0.0;
            for (int i = i0; i < i1; ++i) sum += f.cy[f.fy(i, fj)];
            c.cy[c.fy(I, J)] = 0.5 * sum;
        }
    }
    for (int J = 0; J < c.ny; ++J) {
        for (int I = 0; I < c.nx; ++I) {
            bool fix = false;
            for (int j = 2 * J; j < std::min(2 * J + 2, f.ny); ++j)
                for (int i = 2 * I; i < std::min(2 * I + 2, f.nx); ++i)
                    if (f.fixed[f.id(i, j)]) fix = true;
            if (fix) c.fixed[c.id(I, J)] = 1;
        }
    }
    c.build_diag();
    c.alloc_work();
    return c;
}

class Multigrid {
  public:
    explicit Multigrid(MgLevel&& fine) {
        levels_.push_back(std::move(fine));
        while (levels_.back().nx > 8 || levels_.back().ny > 8) {
            levels_.push_back(coarsen(levels_.back()));
            if (levels_.size() > 40) break;
        }
        // fine-grid-sweep cost of one V-cycle, for the iteration budget
        const double fine_cells = static_cast<double>(levels_[0].cells());
        cycle_sweeps_ = 0.0;
        for (const auto& l : levels_) {
            cycle_sweeps_ += (4.0 + 2.0) * static_cast<double>(l.cells()) / fine_cells;
        }
        cycle_sweeps_ += 200.0 * static_cast<double>(levels_.back().cells()) / fine_cells;
    }

    MgLevel& fine() { return levels_[0]; }
    double cycle_sweeps() const { return cycle_sweeps_; }

    // one V(2,2) cycle for A z = r on the fine level; z returned in fine().phi
    void vcycle(const std::vector<double>& r) {
        MgLevel& f = levels_[0];
        std::copy(r.begin(), r.end(), f.rhs.begin());
        std::fill(f.phi.begin(), f.phi.end(), 0.0);
        descend(0);
    }

  private:
    // cell-centered full weighting: the adjoint of bilinear prolongation
    static void restrict_residual(const MgLevel& lev, MgLevel& crs) {
        std::fill(crs.rhs.begin(), crs.rhs.end(), 0.0);
        for (int j = 0; j < lev.ny; ++j) {
            const int cj = j / 2;
            const int j2 = std::clamp(cj + ((j & 1) ? 1 : -1), 0, crs.ny - 1);
            for (int i = 0; i < lev.nx; ++i) {
                const int ci = i / 2;
                const int i2 = std::clamp(ci + ((i & 1) ? 1 : -1), 0, crs.nx - 1);
                const double r = lev.res[lev.id(i, j)];
                crs.rhs[crs.id(ci, cj)] += 0.5625 * r;
                crs.rhs[crs.id(i2, cj)] += 0.1875 * r;
                crs.rhs[crs.id(ci, j2)] += 0.1875 * r;
                crs.rhs[crs.id(i2, j2)] += 0.0625 * r;
            }
        }
        for (std::size_t c = 0; c < crs.cells(); ++c)
            if (crs.fixed[c]) crs.rhs[c] = 0.0;
    }

    static void prolong_add(const MgLevel& crs, MgLevel& lev) {
        for (int j = 0; j < lev.ny; ++j) {
            const int cj = j / 2;
            const int j2 = std::clamp(cj + ((j & 1) ? 1 : -1), 0, crs.ny - 1);
            for (int i = 0; i < lev.nx; ++i) {
                const std::size_t c = lev.id(i, j);
                if (lev.fixed[c]) continue;
                const int ci = i / 2;
                const int i2 = std::clamp(ci + ((i & 1) ? 1 : -1), 0, crs.nx - 1);
                lev.phi[c] += 0.5625 * crs.phi[crs.id(ci, cj)] +
                              0.1875 * crs.phi[crs.id(i2, cj)] +
                              0.1875 * crs.phi[crs.id(ci, j2)] +
                              0.0625 * crs.phi[crs.id(i2, j2)];
            }
        }
    }

    void descend(std::size_t l) {
        MgLevel& lev = levels_[l];
        if (l + 1 == levels_.size()) {
            for (int s = 0; s < 100; ++s) {
                lev.smooth(0);
                lev.smooth(1);
            }
            return;
        }
        lev.smooth(0);
        lev.smooth(1);
        lev.smooth(0);
        lev.smooth(1);
        lev.residual();
        MgLevel& crs = levels_[l + 1];
        restrict_residual(lev, crs);
        std::fill(crs.phi.begin(), crs.phi.end(), 0.0);
        descend(l + 1);
        prolong_add(crs, lev);
        // reversed color order keeps the preconditioner symmetric
        lev.smooth(1);
        lev.smooth(0);
        lev.smooth(1);
        lev.smooth(0);
    }

    std::vector<MgLevel> levels_;
    double cycle_sweeps_ = 0.0;
};

MgLevel assemble(const Grid2D& g) {
    MgLevel lev;
    lev.nx = g.nx;
    lev.ny = g.ny;
    lev.cx.assign(static_cast<std::size_t>(g.nx + 1) * g.ny, 0.0);
    lev.cy.assign(static_cast<std::size_t>(g.nx) * (g.ny + 1), 0.0);
    lev.fixed.assign(g.fixed.begin(), g.fixed.end());
    const double rx = g.dy / g.dx;
    const double ry = g.dx / g.dy;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i <= g.nx; ++i) {
            double k = 0.0;
            if (i == 0 || i == g.nx) {
                if (g.dirichlet_outer) {
                    const std::size_t c = g.idx(i == 0 ? 0 : g.nx - 1, j);
                    if (!g.fixed[c]) k = 2.0 * g.eps[c] * rx;
                }
            } else {
                const std::size_t a = g.idx(i - 1, j), b = g.idx(i, j);
                const bool fa = g.fixed[a], fb = g.fixed[b];
                if (fa && fb)
                    k = 0.0;
                else if (fa)
                    k = 2.0 * g.eps[b] * rx;
                else if (fb)
                    k = 2.0 * g.eps[a] * rx;
                else
                    k = harmonic(g.eps[a], g.eps[b]) * rx;
            }
            lev.cx[lev.fx(i, j)] = k;
        }
    }
    for (int j = 0; j <= g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            double k = 0.0;
            if (j == 0 || j == g.ny) {
                if (g.dirichlet_outer) {
                    const std::size_t c = g.idx(i, j == 0 ? 0 : g.ny - 1);
                    if (!g.fixed[c]) k = 2.0 * g.eps[c] * ry;
                }
            } else {
                const std::size_t a = g.idx(i, j - 1), b = g.idx(i, j);
                const bool fa = g.fixed[a], fb = g.fixed[b];
                if (fa && fb)
                    k = 0.0;
                else if (fa)
                    k = 2.0 * g.eps[b] * ry;
                else if (fb)
                    k = 2.0 * g.eps[a] * ry;
                else
                    k = harmonic(g.eps[a], g.eps[b]) * ry;
            }
            lev.cy[lev.fy(i, j)] = k;
        }
    }
    lev.build_diag();
    lev.alloc_work();
    return lev;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

Grid2D discretize(const CrossSection& cs, double target_dx, const DiscretizeOptions& opt) {
    cs.validate();
    if (!(target_dx > 0.0)) throw domain_error("discretize: target_dx must be > 0");
    if (cs.feature_size > 0.0 && target_dx > cs.feature_size / 8.0 * (1.0 + 1e-12)) {
        throw resolution_error("discretize: target_dx " + std::to_string(target_dx) +
                               " m leaves the smallest feature (" +
                               std::to_string(cs.feature_size) +
                               " m) spanned by fewer than 8 cells");
    }
    if (cs.electrodes.size() > 200) throw domain_error("discretize: too many electrodes");

    const Rect& bb = cs.bounding_box;
    const Axis ax = make_axis(bb.x0, bb.x1, target_dx, cs.align_x);
    const Axis ay = make_axis(bb.y0, bb.y1, target_dx, cs.align_y);
    if (ax.n < 16 || ay.n < 16) {
        throw resolution_error("discretize: grid must be at least 16x16 cells, got " +
                               std::to_string(ax.n) + "x" + std::to_string(ay.n));
    }
    const std::size_t cells = static_cast<std::size_t>(ax.n) * ay.n;
    if (cells > opt.node_budget) {
        throw resource_error("discretize: " + std::to_string(cells) +
                             " nodes exceed the budget of " + std::to_string(opt.node_budget));
    }

    Grid2D g;
    g.nx = ax.n;
    g.ny = ay.n;
    g.dx = ax.h;
    g.dy = ay.h;
    g.x0 = ax.origin;
    g.y0 = ay.origin;
    g.dirichlet_outer = opt.dirichlet_outer;
    g.eps.resize(cells);
    g.fixed.assign(cells, 0);
    g.fixed_value.assign(cells, 0.0);
    g.material.resize(cells);
    for (const Electrode& e : cs.electrodes) {
        g.electrode_labels.push_back(e.label);
        g.electrode_potentials.push_back(e.potential);
    }

    std::vector<std::size_t> hits(cs.electrodes.size(), 0);
    std::map<std::string, std::uint16_t> mat_index;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t c = g.idx(i, j);
            const double x = std::clamp(g.cx(i), bb.x0, bb.x1);
            const double y = std::clamp(g.cy(j), bb.y0, bb.y1);
            const Material& m = cs.material_at(x, y);
            g.eps[c] = m.eps_r;
            auto [it, inserted] = mat_index.try_emplace(m.name, 0);
            if (inserted) {
                it->second = static_cast<std::uint16_t>(g.material_names.size());
                g.material_names.push_back(m.name);
            }
            g.material[c] = it->second;
            for (std::size_t e = 0; e < cs.electrodes.size(); ++e) {
                if (cs.electrodes[e].rect.contains(x, y)) {
                    g.fixed[c] = static_cast<std::uint8_t>(1 + e);
                    g.fixed_value[c] = cs.electrodes[e].potential;
                    ++hits[e];
                }
            }
        }
    }
    for (std::size_t e = 0; e < cs.electrodes.size(); ++e) {
        if (hits[e] == 0) {
            throw resolution_error("discretize: electrode \"" + cs.electrodes[e].label +
                                   "\" covers no grid node; refine target_dx");
        }
    }
    return g;
}

PotentialField solve_laplace(const Grid2D& grid, double tol, const SolveOptions& opt) {
    if (!(tol >= 1e-12 && tol <= 1e-4)) {
        throw domain_error("solve_laplace: tol must lie in [1e-12, 1e-4]");
    }
    if (grid.nx < 16 || grid.ny < 16) throw domain_error("solve_laplace: grid too small");

    Multigrid mg(assemble(grid));
    MgLevel& fine = mg.fine();

    PotentialField out;
    out.grid = &grid;
    out.phi.assign(grid.cells(), 0.0);
    for (std::size_t c = 0; c < grid.cells(); ++c) {
        if (grid.fixed[c]) out.phi[c] = grid.fixed_value[c];
    }

    std::vector<double> r(grid.cells(), 0.0), z(grid.cells(), 0.0), p(grid.cells(), 0.0),
        ap(grid.cells(), 0.0);
    // residual scale of the cold-start problem; the convergence criterion is
    // pinned to it so a warm start cannot loosen or tighten the tolerance
    fine.apply(out.phi, r);
    for (std::size_t c = 0; c < grid.cells(); ++c) r[c] = fine.fixed[c] ? 0.0 : -r[c];
    const double norm0 = std::sqrt(dot(r, r));
    if (norm0 == 0.0) {
        out.residual = 0.0;
        return out;
    }

    if (opt.initial_phi.size() == grid.cells()) {
        for (std::size_t c = 0; c < grid.cells(); ++c) {
            if (!grid.fixed[c]) out.phi[c] = opt.initial_phi[c];
        }
        fine.apply(out.phi, r);
        for (std::size_t c = 0; c < grid.cells(); ++c) r[c] = fine.fixed[c] ? 0.0 : -r[c];
    }

    double sweeps = 0.0;
    double rz = 0.0;
    long iter = 0;
    double rel = std::sqrt(dot(r, r)) / norm0;
    while (rel > tol) {
        mg.vcycle(r);
        std::copy(fine.phi.begin(), fine.phi.end(), z.begin());
        sweeps += mg.cycle_sweeps();
        const double rz_new = dot(r, z);
        if (iter == 0) {
            std::copy(z.begin(), z.end(), p.begin());
        } else {
            const double beta = rz_new / rz;
            for (std::size_t c = 0; c < p.size(); ++c) p[c] = z[c] + beta * p[c];
        }
        rz = rz_new;
        fine.apply(p, ap);
        sweeps += 1.0;
        const double pap = dot(p, ap);
        if (pap <= 0.0) {
            if (rel > tol) {
                throw convergence_error("solve_laplace: stagnated at relative residual " +
                                            std::to_string(rel),
                                        rel);
            }
            break;
        }
        const double alpha = rz / pap;
        for (std::size_t c = 0; c < p.size(); ++c) {
            if (!fine.fixed[c]) out.phi[c] += alpha * p[c];
            r[c] -= alpha * ap[c];
        }
        ++iter;
        rel = std::sqrt(dot(r, r)) / norm0;
        out.residual_history.push_back(rel);
        if (rel <= tol) break;
        if (sweeps > opt.max_sweeps) {
            throw convergence_error("solve_laplace: no convergence within " +
                                        std::to_string(opt.max_sweeps) +
                                        " sweep equivalents (residual " + std::to_string(rel) + ")",
                                    rel);
        }
    }
    out.residual = rel;
    out.iterations = iter;
    return out;
}

ElectrodeCharges electrode_charges(const Grid2D& g, const PotentialField& field) {
    ElectrodeCharges q;
    const std::vector<double>& phi = field.phi;
    const double rx = g.dy / g.dx;
    const double ry = g.dx / g.dy;
    auto add = [&](std::size_t fixed_cell, double k, double phi_free) {
        const double v = g.fixed_value[fixed_cell];
        const double flux = k * (v - phi_free);  // out of the conductor
        if (v > 0.0)
            q.positive += flux;
        else
            q.negative += flux;
    };
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t c = g.idx(i, j);
            if (g.fixed[c]) continue;
            if (i > 0 && g.fixed[c - 1]) add(c - 1, 2.0 * g.eps[c] * rx, phi[c]);
            if (i + 1 < g.nx && g.fixed[c + 1]) add(c + 1, 2.0 * g.eps[c] * rx, phi[c]);
            if (j > 0 && g.fixed[c - g.nx]) add(c - g.nx, 2.0 * g.eps[c] * ry, phi[c]);
            if (j + 1 < g.ny && g.fixed[c + g.nx]) add(c + g.nx, 2.0 * g.eps[c] * ry, phi[c]);
        }
    }
    return q;
}

namespace {

struct EnergyBreakdown {
    double total = 0.0;  // J/m per volt^2 scale (includes eps0)
    std::map<std::string, double> per_material;
};

// Field-energy quadrature from face gradients averaged per cell, weighted
// by the cell permittivity. A different discrete functional from the
// face-flux charge integral (which uses harmonic-mean face permittivities),
// so the two capacitance routes disagree by a real discretization error at
// interfaces and corners.
EnergyBreakdown field_energy(const Grid2D& g, const PotentialField& f) {
    EnergyBreakdown e;
    const std::vector<double>& phi = f.phi;
    auto face_grad = [&](std::size_t c, std::size_t nb, bool has_nb, double h) {
        if (!has_nb) {
            if (!g.dirichlet_outer) return 0.0;       // reflecting wall
            return (0.0 - phi[c]) / (0.5 * h);        // ghost at 0 V
        }
        if (g.fixed[nb]) return (g.fixed_value[nb] - phi[c]) / (0.5 * h);
        return (phi[nb] - phi[c]) / h;
    };
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t c = g.idx(i, j);
            if (g.fixed[c]) continue;
            const double gw = face_grad(c, c - 1, i > 0, g.dx);
            const double ge = face_grad(c, c + 1, i + 1 < g.nx, g.dx);
            const double gs = face_grad(c, c - g.nx, j > 0, g.dy);
            const double gn = face_grad(c, c + g.nx, j + 1 < g.ny, g.dy);
            const double grad2 = 0.5 * (gw * gw + ge * ge) + 0.5 * (gs * gs + gn * gn);
            const double w = 0.5 * phys::eps0 * g.eps[c] * grad2 * g.dx * g.dy;
            e.total += w;
            e.per_material[g.material_names[g.material[c]]] += w;
        }
    }
    return e;
}

}  // namespace

double sample_field(const Grid2D& g, const std::vector<double>& phi, double x, double y) {
    // bilinear interpolation on cell centers, clamped at the rim
    const double fi = std::clamp((x - g.x0) / g.dx - 0.5, 0.0, static_cast<double>(g.nx - 1));
    const double fj = std::clamp((y - g.y0) / g.dy - 0.5, 0.0, static_cast<double>(g.ny - 1));
    const int i0 = std::min(static_cast<int>(fi), g.nx - 2);
    const int j0 = std::min(static_cast<int>(fj), g.ny - 2);
    const double tx = fi - i0;
    const double ty = fj - j0;
    const double v00 = phi[g.idx(i0, j0)], v10 = phi[g.idx(i0 + 1, j0)];
    const double v01 = phi[g.idx(i0, j0 + 1)], v11 = phi[g.idx(i0 + 1, j0 + 1)];
    return (1 - tx) * (1 - ty) * v00 + tx * (1 - ty) * v10 + (1 - tx) * ty * v01 + tx * ty * v11;
}

void write_field_csv(const Grid2D& grid, const PotentialField& field, const std::string& path,
                     int stride) {
    if (stride < 1) throw domain_error("write_field_csv: stride must be >= 1");
    csv::Writer w(path, {"x_m", "y_m", "phi_v", "eps_r"});
    for (int j = 0; j < grid.ny; j += stride) {
        for (int i = 0; i < grid.nx; i += stride) {
            const std::size_t c = grid.idx(i, j);
            w.row({grid.cx(i), grid.cy(j), field.phi[c], grid.eps[c]});
        }
    }
    w.close();
}

void write_convergence_csv(const PotentialField& field, const std::string& path) {
    csv::Writer w(path, {"iteration", "relative_residual"});
    for (std::size_t k = 0; k < field.residual_history.size(); ++k) {
        w.row({static_cast<long>(k + 1), field.residual_history[k]});
    }
    w.close();
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

CapacitanceResult capacitance_per_length(const CrossSection& cs,
                                         std::span<const double> dx_schedule, double tol,
                                         const DiscretizeOptions& opt,
                                         const GridObserver& observer) {
    if (dx_schedule.size() < 2) {
        throw domain_error("capacitance_per_length: dx_schedule needs >= 2 entries");
    }
    for (std::size_t i = 1; i < dx_schedule.size(); ++i) {
        if (!(dx_schedule[i] < dx_schedule[i - 1])) {
            throw domain_error("capacitance_per_length: dx_schedule must be strictly refining");
        }
    }

    // normalize the drive to +-0.5 V across the two potential groups
    CrossSection driven = cs;
    driven.validate();
    std::set<double> potentials;
    for (const Electrode& e : driven.electrodes) potentials.insert(e.potential);
    if (potentials.size() != 2) {
        throw domain_error(
            "capacitance_per_length: need a two-terminal problem (exactly two distinct "
            "electrode potentials), got " +
            std::to_string(potentials.size()));
    }
    const double lo = *potentials.begin();
    for (Electrode& e : driven.electrodes) {
        e.potential = e.potential == lo ? -0.5 : 0.5;
    }

    CapacitanceResult result;
    result.geometry_hash = [&] {
        char buf[20];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(fnv1a64(driven.to_json().dump())));
        return std::string(buf);
    }();

    Grid2D prev_grid;
    std::vector<double> prev_phi;
    for (std::size_t k = 0; k < dx_schedule.size(); ++k) {
        const Grid2D grid = discretize(driven, dx_schedule[k], opt);
        SolveOptions solve_opt;
        if (!prev_phi.empty()) {
            // warm start from the coarser solution of the schedule
            solve_opt.initial_phi.resize(grid.cells());
            for (int j = 0; j < grid.ny; ++j) {
                for (int i = 0; i < grid.nx; ++i) {
                    solve_opt.initial_phi[grid.idx(i, j)] =
                        sample_field(prev_grid, prev_phi, grid.cx(i), grid.cy(j));
                }
            }
        }
        const PotentialField field = solve_laplace(grid, tol, solve_opt);
        if (observer) observer(k, grid, field);
        const ElectrodeCharges q = electrode_charges(grid, field);
        const EnergyBreakdown w = field_energy(grid, field);
        CapacitanceEntry entry;
        entry.dx = dx_schedule[k];
        entry.c_charge = phys::eps0 * q.positive;  // Q / (1 V)
        entry.c_energy = 2.0 * w.total;            // 2W / (1 V)^2
        result.per_grid.push_back(entry);
        if (k + 1 == dx_schedule.size()) {
            for (const auto& [name, energy] : w.per_material) {
                result.participation[name] = energy / w.total;
            }
        } else {
            prev_grid = grid;
            prev_phi = field.phi;
        }
    }

    const CapacitanceEntry& finest = result.per_grid.back();
    result.method_gap = std::abs(finest.c_energy - finest.c_charge) / finest.c_charge;
    if (result.method_gap > 0.05) {
        throw consistency_error(
            "capacitance_per_length: energy and charge methods disagree by " +
            std::to_string(result.method_gap * 100.0) + "% on the finest grid");
    }

    const CapacitanceEntry& prev = result.per_grid[result.per_grid.size() - 2];
    const double ratio = prev.dx / finest.dx;
    const double r2 = ratio * ratio;
    result.method = CapacitanceMethod::charge;
    result.c_per_length =
        finest.c_charge + (finest.c_charge - prev.c_charge) / (r2 - 1.0);
    return result;
}

double fin_capacitance(const CrossSection& cs, double fin_length,
                       std::span<const double> dx_schedule, double tol,
                       const DiscretizeOptions& opt) {
    if (!(fin_length > 0.0)) throw domain_error("fin_capacitance: fin_length must be > 0");
    return capacitance_per_length(cs, dx_schedule, tol, opt).c_per_length * fin_length;
}

double parallel_plate_c_per_length(double eps_r, double plate_height, double separation) {
    return eps_r * phys::eps0 * plate_height / separation;
}

CrossSection make_parallel_plate_cross_section(double eps_r, double separation,
                                               double plate_height, double plate_thickness) {
    if (!(separation > 0.0 && plate_height > 0.0 && plate_thickness > 0.0)) {
        throw domain_error("parallel plate: all dimensions must be > 0");
    }
    CrossSection cs;
    cs.background = Material{"dielectric", eps_r, 0.0};
    cs.bounding_box = Rect{-plate_thickness, 0.0, separation + plate_thickness, plate_height};
    cs.feature_size = separation;
    cs.align_x = {0.0, separation};
    cs.align_y = {0.0, plate_height};
    cs.electrodes.push_back({Rect{-plate_thickness, 0.0, 0.0, plate_height}, -0.5, "L"});
    cs.electrodes.push_back({Rect{separation, 0.0, separation + plate_thickness, plate_height},
                             +0.5, "R"});
    cs.validate();
    return cs;
}

}  // namespace finmet
