#ifndef FINMET_MATERIALS_HPP
#define FINMET_MATERIALS_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace finmet {

struct Material {
    std::string name;
    double eps_r = 1.0;
    double loss_tangent = 0.0;

    void validate() const;  // eps_r >= 1, loss_tangent >= 0
};

// Axis-aligned rectangle, coordinates in meters.
struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    bool contains(double x, double y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
    bool contains(const Rect& r) const {
        return r.x0 >= x0 && r.x1 <= x1 && r.y0 >= y0 && r.y1 <= y1;
    }
    bool overlaps(const Rect& r) const {  // positive-area intersection
        return r.x0 < x1 && r.x1 > x0 && r.y0 < y1 && r.y1 > y0;
    }
    void validate(const std::string& what) const;  // x0 < x1, y0 < y1, finite
};

struct Region {
    Rect rect;
    Material material;
};

struct Electrode {
    Rect rect;
    double potential = 0.0;  // volts
    std::string label;
};

// 2D dielectric/electrode layout; input to the field solver. Regions are
// ordered: a later region overrides earlier ones where they overlap.
struct CrossSection {
    Rect bounding_box;
    Material background;
    std::vector<Region> regions;
    std::vector<Electrode> electrodes;

    // Smallest feature the solver must resolve (0 = unconstrained).
    double feature_size = 0.0;
    // Interface coordinates the discretizer should place on cell boundaries.
    std::vector<double> align_x;
    std::vector<double> align_y;

    // Material lookup at a point; sample points are clamped into the bounding
    // box so a grid that slightly overhangs the box sees the edge materials.
    const Material& material_at(double x, double y) const;

    void validate(int min_electrodes = 2) const;

    nlohmann::json to_json() const;
    static CrossSection from_json(const nlohmann::json& j);
};

struct NitrideCap {
    double thickness = 100e-9;
    double eps_r = 7.0;
};

struct FinGeometry {
    double thickness = 219e-9;       // fin width t
    double height = 3.55e-6;         // fin height h
    double length = 100e-6;          // capacitor length along the fin
    double metal_thickness = 30e-9;  // Al film
    double sidewall_coverage = 1.0;  // fraction of h covered by metal
    std::optional<NitrideCap> nitride_cap = NitrideCap{};
    double trench_depth = 0.0;
    // Lateral extent of the metal pads on the trench floor. Unstated in the
    // source geometry; treated as a sweep parameter.
    double pad_extent = 1.5e-6;

    void validate() const;
};

// Builds the metallized-fin capacitor cross-section: Si substrate below y=0,
// fin of width t centered at x=0 rising to y=h, metal sheets on both
// sidewalls extended onto the floor as pads, optional nitride cap, vacuum
// background. Left electrode sits at -0.5 V, right at +0.5 V.
CrossSection build_fin_cross_section(const FinGeometry& fin, const Material& substrate,
                                     const Material& barrier, double padding_factor = 5.0);

}  // namespace finmet

#endif
