#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "finmet/errors.hpp"
#include "finmet/materials.hpp"

using namespace finmet;

namespace {

Material silicon() { return Material{"silicon", 11.7, 0.0}; }

}  // namespace

TEST_SUITE("materials") {

TEST_CASE("material invariants") {
    CHECK_THROWS_AS(Material({"bad", 0.5, 0.0}).validate(), domain_error);
    CHECK_THROWS_AS(Material({"bad", 11.7, -1e-7}).validate(), domain_error);
    CHECK_NOTHROW(silicon().validate());
}

TEST_CASE("rectangle invariants") {
    CHECK_THROWS_AS(Rect({0, 0, 0, 1}).validate("r"), domain_error);
    CHECK_THROWS_AS(Rect({0, 1, 1, 0}).validate("r"), domain_error);
    CHECK_THROWS_AS(Rect({0, 0, std::nan(""), 1}).validate("r"), domain_error);
    CHECK_NOTHROW(Rect({-1, -1, 1, 1}).validate("r"));
}

TEST_CASE("fin geometry invariants") {
    FinGeometry fin;
    CHECK_NOTHROW(fin.validate());
    fin.thickness = 2.0;
    fin.height = 1.0;  // height must exceed thickness
    CHECK_THROWS_AS(fin.validate(), domain_error);
    fin = FinGeometry{};
    fin.sidewall_coverage = 0.0;
    CHECK_THROWS_AS(fin.validate(), domain_error);
    fin.sidewall_coverage = 1.2;
    CHECK_THROWS_AS(fin.validate(), domain_error);
}

TEST_CASE("builder: 219 nm electrodes face across the fin") {
    FinGeometry fin;  // defaults: t = 219 nm, h = 3.55 um
    const CrossSection cs = build_fin_cross_section(fin, silicon(), silicon(), 5.0);

    const Electrode* left = nullptr;
    const Electrode* right = nullptr;
    for (const Electrode& e : cs.electrodes) {
        if (e.label == "L") left = &e;
        if (e.label == "R") right = &e;
    }
    REQUIRE(left);
    REQUIRE(right);
    CHECK(left->potential == doctest::Approx(-0.5));
    CHECK(right->potential == doctest::Approx(+0.5));
    // inner faces separated by exactly the fin thickness, silicon between
    CHECK(right->rect.x0 - left->rect.x1 == doctest::Approx(219e-9).epsilon(1e-12));
    CHECK(cs.material_at(0.0, fin.height / 2).eps_r == doctest::Approx(11.7));
    CHECK(cs.material_at(0.0, -1e-6).eps_r == doctest::Approx(11.7));       // substrate
    CHECK(cs.material_at(5e-6, 5e-6).eps_r == doctest::Approx(1.0));        // vacuum
    CHECK(cs.material_at(0.0, fin.height + 10e-9).eps_r == doctest::Approx(7.0));  // cap
}

TEST_CASE("builder: padding factor sets the bounding box") {
    FinGeometry fin;
    const CrossSection cs = build_fin_cross_section(fin, silicon(), silicon(), 5.0);
    const double min_half_width = 5.0 * fin.height;
    CHECK(cs.bounding_box.x1 >= min_half_width);
    CHECK(cs.bounding_box.x1 >= 17.75e-6);
    CHECK(cs.bounding_box.y1 - fin.height >= min_half_width);
    CHECK(-cs.bounding_box.y0 >= min_half_width);
    CHECK_THROWS_AS(build_fin_cross_section(fin, silicon(), silicon(), 2.0), domain_error);
}

TEST_CASE("builder output is mirror symmetric about x = 0") {
    FinGeometry fin;
    fin.trench_depth = 50e-9;
    const CrossSection cs = build_fin_cross_section(fin, silicon(), silicon(), 5.0);

    auto mirrored_present_region = [&](const Region& r) {
        return std::any_of(cs.regions.begin(), cs.regions.end(), [&](const Region& m) {
            return std::abs(m.rect.x0 + r.rect.x1) < 1e-15 &&
                   std::abs(m.rect.x1 + r.rect.x0) < 1e-15 && m.rect.y0 == r.rect.y0 &&
                   m.rect.y1 == r.rect.y1 && m.material.eps_r == r.material.eps_r;
        });
    };
    for (const Region& r : cs.regions) CHECK(mirrored_present_region(r));

    auto mirrored_present_electrode = [&](const Electrode& e) {
        return std::any_of(cs.electrodes.begin(), cs.electrodes.end(), [&](const Electrode& m) {
            return std::abs(m.rect.x0 + e.rect.x1) < 1e-15 &&
                   std::abs(m.rect.x1 + e.rect.x0) < 1e-15 && m.rect.y0 == e.rect.y0 &&
                   m.rect.y1 == e.rect.y1 && m.potential == -e.potential;
        });
    };
    for (const Electrode& e : cs.electrodes) CHECK(mirrored_present_electrode(e));
}

TEST_CASE("builder: every electrode lies strictly inside the bounding box") {
    for (double t : {219e-9, 319e-9}) {
        FinGeometry fin;
        fin.thickness = t;
        const CrossSection cs = build_fin_cross_section(fin, silicon(), silicon(), 5.0);
        for (const Electrode& e : cs.electrodes) {
            CHECK(e.rect.x0 > cs.bounding_box.x0);
            CHECK(e.rect.x1 < cs.bounding_box.x1);
            CHECK(e.rect.y0 > cs.bounding_box.y0);
            CHECK(e.rect.y1 < cs.bounding_box.y1);
        }
    }
}

TEST_CASE("builder rejections") {
    FinGeometry fin;
    fin.metal_thickness = 3.0 * fin.height;  // >= half the fin-to-boundary spacing
    CHECK_THROWS_AS(build_fin_cross_section(fin, silicon(), silicon(), 3.0), domain_error);
    FinGeometry wide_pad;
    wide_pad.pad_extent = 20e-6;
    CHECK_THROWS_AS(build_fin_cross_section(wide_pad, silicon(), silicon(), 5.0), domain_error);
}

TEST_CASE("region override order: last region wins") {
    CrossSection cs;
    cs.background = Material{"vacuum", 1.0, 0.0};
    cs.bounding_box = Rect{0, 0, 1, 1};
    cs.regions.push_back({Rect{0.1, 0.1, 0.9, 0.9}, Material{"a", 2.0, 0.0}});
    cs.regions.push_back({Rect{0.4, 0.4, 0.6, 0.6}, Material{"b", 5.0, 0.0}});
    CHECK(cs.material_at(0.5, 0.5).name == "b");
    CHECK(cs.material_at(0.2, 0.2).name == "a");
    CHECK(cs.material_at(0.05, 0.5).name == "vacuum");
    // sample point clamping at the rim
    CHECK(cs.material_at(-3.0, 0.5).name == "vacuum");
}

TEST_CASE("cross-section validation") {
    CrossSection cs;
    cs.background = Material{"vacuum", 1.0, 0.0};
    cs.bounding_box = Rect{0, 0, 1, 1};
    CHECK_THROWS_AS(cs.validate(), domain_error);  // needs two electrodes
    cs.electrodes.push_back({Rect{0.1, 0.1, 0.2, 0.9}, -0.5, "L"});
    cs.electrodes.push_back({Rect{0.8, 0.1, 0.9, 0.9}, +0.5, "L"});  // duplicate label
    CHECK_THROWS_AS(cs.validate(), domain_error);
    cs.electrodes[1].label = "R";
    CHECK_NOTHROW(cs.validate());
    cs.electrodes.push_back({Rect{0.15, 0.2, 0.25, 0.5}, -0.5, "X"});  // overlaps L
    CHECK_THROWS_AS(cs.validate(), domain_error);
    cs.electrodes.pop_back();
    cs.electrodes.push_back({Rect{0.5, 0.5, 1.5, 0.9}, 0.0, "out"});  // outside box
    CHECK_THROWS_AS(cs.validate(), domain_error);
}

TEST_CASE("serialization round trip") {
    FinGeometry fin;
    const CrossSection cs = build_fin_cross_section(fin, silicon(), silicon(), 5.0);
    const CrossSection back = CrossSection::from_json(cs.to_json());
    REQUIRE(back.regions.size() == cs.regions.size());
    REQUIRE(back.electrodes.size() == cs.electrodes.size());
    for (std::size_t i = 0; i < cs.regions.size(); ++i) {
        CHECK(back.regions[i].rect.x0 == cs.regions[i].rect.x0);
        CHECK(back.regions[i].rect.y1 == cs.regions[i].rect.y1);
        CHECK(back.regions[i].material.eps_r == cs.regions[i].material.eps_r);
    }
    for (std::size_t i = 0; i < cs.electrodes.size(); ++i) {
        CHECK(back.electrodes[i].rect.x1 == cs.electrodes[i].rect.x1);
        CHECK(back.electrodes[i].potential == cs.electrodes[i].potential);
        CHECK(back.electrodes[i].label == cs.electrodes[i].label);
    }
    CHECK(back.feature_size == cs.feature_size);
    CHECK(back.align_x == cs.align_x);
    CHECK(back.to_json().dump() == cs.to_json().dump());
}

}  // TEST_SUITE
