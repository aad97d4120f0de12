#include "finmet/materials.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "finmet/errors.hpp"

namespace finmet {

void Material::validate() const {
    if (!(eps_r >= 1.0) || !std::isfinite(eps_r)) {
        throw domain_error("material \"" + name + "\": eps_r must be >= 1, got " +
                           std::to_string(eps_r));
    }
    if (!(loss_tangent >= 0.0) || !std::isfinite(loss_tangent)) {
        throw domain_error("material \"" + name + "\": loss_tangent must be >= 0");
    }
}

void Rect::validate(const std::string& what) const {
    if (!std::isfinite(x0) || !std::isfinite(y0) || !std::isfinite(x1) || !std::isfinite(y1)) {
        throw domain_error(what + ": rectangle coordinates must be finite");
    }
    if (!(x0 < x1) || !(y0 < y1)) {
        throw domain_error(what + ": degenerate rectangle (need x0 < x1 and y0 < y1)");
    }
}

const Material& CrossSection::material_at(double x, double y) const {
    const double cx = std::clamp(x, bounding_box.x0, bounding_box.x1);
    const double cy = std::clamp(y, bounding_box.y0, bounding_box.y1);
    const Material* found = &background;
    for (const Region& r : regions) {
        if (r.rect.contains(cx, cy)) found = &r.material;  // last region wins
    }
    return *found;
}

void CrossSection::validate(int min_electrodes) const {
    bounding_box.validate("cross-section bounding box");
    background.validate();
    for (const Region& r : regions) {
        r.rect.validate("region (" + r.material.name + ")");
        r.material.validate();
        if (!bounding_box.contains(r.rect)) {
            throw domain_error("region (" + r.material.name + ") lies outside the bounding box");
        }
    }
    if (static_cast<int>(electrodes.size()) < min_electrodes) {
        throw domain_error("cross-section needs at least " + std::to_string(min_electrodes) +
                           " electrodes, got " + std::to_string(electrodes.size()));
    }
    std::set<std::string> labels;
    for (const Electrode& e : electrodes) {
        e.rect.validate("electrode \"" + e.label + "\"");
        if (!std::isfinite(e.potential)) {
            throw domain_error("electrode \"" + e.label + "\": potential must be finite");
        }
        if (!bounding_box.contains(e.rect)) {
            throw domain_error("electrode \"" + e.label + "\" lies outside the bounding box");
        }
        if (!labels.insert(e.label).second) {
            throw domain_error("duplicate electrode label \"" + e.label + "\"");
        }
    }
    for (size_t i = 0; i < electrodes.size(); ++i) {
        for (size_t j = i + 1; j < electrodes.size(); ++j) {
            if (electrodes[i].rect.overlaps(electrodes[j].rect)) {
                throw domain_error("electrodes \"" + electrodes[i].label + "\" and \"" +
                                   electrodes[j].label + "\" overlap");
            }
        }
    }
}

namespace {

nlohmann::json rect_json(const Rect& r) {
    return nlohmann::json{{"x0", r.x0}, {"y0", r.y0}, {"x1", r.x1}, {"y1", r.y1}};
}

Rect rect_from(const nlohmann::json& j) {
    return Rect{j.at("x0").get<double>(), j.at("y0").get<double>(), j.at("x1").get<double>(),
                j.at("y1").get<double>()};
}

nlohmann::json material_json(const Material& m) {
    return nlohmann::json{{"name", m.name}, {"eps_r", m.eps_r}, {"loss_tangent", m.loss_tangent}};
}

Material material_from(const nlohmann::json& j) {
    Material m;
    m.name = j.at("name").get<std::string>();
    m.eps_r = j.at("eps_r").get<double>();
    m.loss_tangent = j.value("loss_tangent", 0.0);
    return m;
}

}  // namespace

nlohmann::json CrossSection::to_json() const {
    nlohmann::json j;
    j["units"] = {{"length", "m"}, {"potential", "V"}};
    j["bounding_box"] = rect_json(bounding_box);
    j["background"] = material_json(background);
    j["regions"] = nlohmann::json::array();
    for (const Region& r : regions) {
        j["regions"].push_back({{"rect", rect_json(r.rect)}, {"material", material_json(r.material)}});
    }
    j["electrodes"] = nlohmann::json::array();
    for (const Electrode& e : electrodes) {
        j["electrodes"].push_back(
            {{"rect", rect_json(e.rect)}, {"potential", e.potential}, {"label", e.label}});
    }
    if (feature_size > 0.0) j["feature_size"] = feature_size;
    if (!align_x.empty()) j["align_x"] = align_x;
    if (!align_y.empty()) j["align_y"] = align_y;
    return j;
}

CrossSection CrossSection::from_json(const nlohmann::json& j) {
    CrossSection cs;
    cs.bounding_box = rect_from(j.at("bounding_box"));
    cs.background = material_from(j.at("background"));
    for (const auto& rj : j.at("regions")) {
        cs.regions.push_back({rect_from(rj.at("rect")), material_from(rj.at("material"))});
    }
    for (const auto& ej : j.at("electrodes")) {
        cs.electrodes.push_back({rect_from(ej.at("rect")), ej.at("potential").get<double>(),
                                 ej.at("label").get<std::string>()});
    }
    cs.feature_size = j.value("feature_size", 0.0);
    if (j.contains("align_x")) cs.align_x = j.at("align_x").get<std::vector<double>>();
    if (j.contains("align_y")) cs.align_y = j.at("align_y").get<std::vector<double>>();
    cs.validate();
    return cs;
}

void FinGeometry::validate() const {
    if (!(thickness > 0.0)) throw domain_error("fin: thickness must be > 0");
    if (!(height > thickness)) {
        throw domain_error("fin: height must exceed thickness (got h=" + std::to_string(height) +
                           " m, t=" + std::to_string(thickness) + " m)");
    }
    if (!(length > 0.0)) throw domain_error("fin: length must be > 0");
    if (!(metal_thickness > 0.0)) throw domain_error("fin: metal_thickness must be > 0");
    if (!(sidewall_coverage > 0.0) || sidewall_coverage > 1.0) {
        throw domain_error("fin: sidewall_coverage must be in (0, 1]");
    }
    if (nitride_cap) {
        if (!(nitride_cap->thickness > 0.0)) throw domain_error("fin: nitride cap thickness must be > 0");
        if (!(nitride_cap->eps_r >= 1.0)) throw domain_error("fin: nitride cap eps_r must be >= 1");
    }
    if (trench_depth < 0.0) throw domain_error("fin: trench_depth must be >= 0");
    if (!(pad_extent > 0.0)) throw domain_error("fin: pad_extent must be > 0");
}

CrossSection build_fin_cross_section(const FinGeometry& fin, const Material& substrate,
                                     const Material& barrier, double padding_factor) {
    fin.validate();
    substrate.validate();
    barrier.validate();
    if (!(padding_factor >= 3.0)) {
        throw domain_error("padding_factor must be >= 3, got " + std::to_string(padding_factor));
    }
    const double t = fin.thickness;
    const double h = fin.height;
    const double m = fin.metal_thickness;
    const double pad = padding_factor * h;
    if (m >= 0.5 * pad) {
        throw domain_error("metal thickness must be below half the fin-to-boundary spacing");
    }
    if (fin.pad_extent + m >= pad) {
        throw domain_error("pad_extent reaches the bounding box; reduce it or grow padding_factor");
    }

    CrossSection cs;
    cs.background = Material{"vacuum", 1.0, 0.0};
    cs.bounding_box = Rect{-(t / 2 + pad), -pad, t / 2 + pad, h + pad};
    cs.feature_size = t;
    cs.align_x = {-t / 2, t / 2};
    cs.align_y = {0.0, h};

    // substrate slab; for a nonzero trench depth the floor around the fin is
    // recessed and the outer substrate keeps its original surface
    cs.regions.push_back({Rect{cs.bounding_box.x0, cs.bounding_box.y0, cs.bounding_box.x1, 0.0},
                          substrate});
    if (fin.trench_depth > 0.0) {
        const double trench_half = t / 2 + m + fin.pad_extent + 0.5e-6;
        const double shoulder = fin.trench_depth;
        if (trench_half < t / 2 + pad) {
            cs.regions.push_back(
                {Rect{cs.bounding_box.x0, 0.0, -trench_half, shoulder}, substrate});
            cs.regions.push_back(
                {Rect{trench_half, 0.0, cs.bounding_box.x1, shoulder}, substrate});
        }
    }
    // the fin itself (tunnel-barrier material)
    cs.regions.push_back({Rect{-t / 2, 0.0, t / 2, h}, barrier});
    if (fin.nitride_cap) {
        cs.regions.push_back({Rect{-t / 2, h, t / 2, h + fin.nitride_cap->thickness},
                              Material{"nitride", fin.nitride_cap->eps_r, 0.0}});
    }

    // sidewall metal plus floor pads; pads share the wall potential
    const double cov = fin.sidewall_coverage * h;
    cs.electrodes.push_back({Rect{-t / 2 - m, 0.0, -t / 2, cov}, -0.5, "L"});
    cs.electrodes.push_back({Rect{t / 2, 0.0, t / 2 + m, cov}, +0.5, "R"});
    cs.electrodes.push_back({Rect{-t / 2 - m - fin.pad_extent, 0.0, -t / 2 - m, m}, -0.5, "Lpad"});
    cs.electrodes.push_back({Rect{t / 2 + m, 0.0, t / 2 + m + fin.pad_extent, m}, +0.5, "Rpad"});

    cs.validate();
    return cs;
}

}  // namespace finmet
