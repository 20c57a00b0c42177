#include "isac/scenario.hpp"
#include "isac/units.hpp"

#include <doctest.h>

#include <cmath>

using namespace isac;
using namespace isac::scenario;
using doctest::Approx;

TEST_CASE("default K=3 deployment is an equilateral triangle with a hexagonal sensing region")
{
    const auto t = build_deployment(default_deployment(3));
    REQUIRE(t.num_bs() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(t.bs_positions[i].z == 10.0);
        const auto& a = t.bs_positions[i];
        const auto& b = t.bs_positions[(i + 1) % 3];
        CHECK(distance(a, b) == Approx(200.0));
    }
    const auto& hex = t.sensing_region;
    CHECK(hex.vertices().size() == 6);
    CHECK(hex.contains({0.0, 0.0}));
    CHECK(hex.centroid().x == Approx(0.0).epsilon(1e-9));
    CHECK(std::abs(hex.centroid().y) < 1e-9);
    // regular hexagon of circumradius R = d / (2 sin(pi/3))
    const double R = 200.0 / (2.0 * std::sin(kPi / 3.0));
    for (const auto& v : hex.vertices()) CHECK(std::hypot(v.x, v.y) == Approx(R));
    CHECK(hex.area() == Approx(1.5 * std::sqrt(3.0) * R * R));
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(t.comm_regions[i].radius == 100.0);
        CHECK(t.comm_regions[i].center == horizontal(t.bs_positions[i]));
    }
}

TEST_CASE("heights are applied to BS, UE and target")
{
    auto cfg = default_deployment(3);
    cfg.bs_height_m = 25;
    cfg.ue_height_m = 1.5;
    cfg.target_height_m = 2;
    const auto t = build_deployment(cfg);
    Rng rng = make_rng(3);
    const auto s = sample_realization(t, rng);
    for (const auto& b : s.bs_positions) CHECK(b.z == 25.0);
    for (const auto& u : s.ue_positions) CHECK(u.z == 1.5);
    CHECK(s.target_position.z == 2.0);
}

TEST_CASE("K=2 with sectors facing away from each other has no sensing region")
{
    auto cfg = default_deployment(2);
    cfg.sector_boresights_deg = {90.0, -90.0};  // BS 0 sits at +y, BS 1 at -y
    CHECK_THROWS_AS(build_deployment(cfg), DeploymentError);
}

TEST_CASE("K=2 facing sectors give a bounded region between the two sites")
{
    const auto t = build_deployment(default_deployment(2));
    CHECK_FALSE(t.sensing_region.empty());
    CHECK(t.sensing_region.contains({0.0, 0.0}));
}

TEST_CASE("config validation names the field")
{
    auto cfg = default_deployment(3);
    cfg.inter_bs_distance_m = -1;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("inter_bs_distance_m"), DeploymentError);
    cfg = default_deployment(3);
    cfg.sector_boresights_deg.pop_back();
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("sector_boresights_deg"), DeploymentError);
    cfg = default_deployment(3);
    cfg.num_bs = 1;
    CHECK_THROWS_AS(cfg.validate(), DeploymentError);
    cfg = default_deployment(3);
    cfg.sector_width_deg = 0;
    CHECK_THROWS_AS(cfg.validate(), DeploymentError);
}

TEST_CASE("sampling is a pure function of the seed")
{
    const auto t = build_deployment(default_deployment(3));
    Rng a = make_rng(42), b = make_rng(42);
    for (int i = 0; i < 20; ++i) {
        const auto x = sample_realization(t, a);
        const auto y = sample_realization(t, b);
        CHECK(x.target_position == y.target_position);
        CHECK(x.ue_positions == y.ue_positions);
    }
}

TEST_CASE("every draw satisfies the membership invariants")
{
    const auto t = build_deployment(default_deployment(3));
    Rng rng = make_rng(9);
    for (int i = 0; i < 2000; ++i) {
        const auto s = sample_realization(t, rng);
        CHECK(s.sensing_region.contains(horizontal(s.target_position), 1e-9));
        for (std::size_t m = 0; m < 3; ++m) {
            const auto d = std::hypot(s.ue_positions[m].x - s.bs_positions[m].x,
                                      s.ue_positions[m].y - s.bs_positions[m].y);
            CHECK(d <= 100.0 + 1e-9);
        }
    }
}

TEST_CASE("target draws are uniform: sample mean matches the region centroid")
{
    // Off-center region so the check is not trivially satisfied by symmetry.
    const ConvexPolygon tri({{0, 0}, {4, 0}, {0, 3}});
    Rng rng = make_rng(2024);
    const int n = 100000;
    double sx = 0, sy = 0, sxx = 0, syy = 0;
    SamplingStats st;
    for (int i = 0; i < n; ++i) {
        const auto p = sample_uniform(tri, rng, &st);
        sx += p.x;
        sy += p.y;
        sxx += p.x * p.x;
        syy += p.y * p.y;
    }
    const double mx = sx / n, my = sy / n;
    const double se_x = std::sqrt((sxx / n - mx * mx) / n);
    const double se_y = std::sqrt((syy / n - my * my) / n);
    CHECK(std::abs(mx - 4.0 / 3) < 3 * se_x);
    CHECK(std::abs(my - 1.0) < 3 * se_y);

    // rejection rate stays below 1 - area/bbox + 5 sigma
    const double p_rej = 1.0 - tri.area() / 12.0;
    const double trials = static_cast<double>(st.accepted + st.rejected);
    const double sigma = std::sqrt(p_rej * (1 - p_rej) / trials);
    CHECK(st.rejected / trials < p_rej + 5 * sigma);
    CHECK(st.accepted == static_cast<std::size_t>(n));
}

TEST_CASE("hexagon draws are centered on the deployment centroid")
{
    const auto t = build_deployment(default_deployment(3));
    Rng rng = make_rng(77);
    const int n = 100000;
    double sx = 0, sy = 0, sxx = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        const auto p = sample_uniform(t.sensing_region, rng);
        sx += p.x;
        sy += p.y;
        sxx += p.x * p.x;
        syy += p.y * p.y;
    }
    const double mx = sx / n, my = sy / n;
    CHECK(std::abs(mx) < 3 * std::sqrt((sxx / n - mx * mx) / n));
    CHECK(std::abs(my) < 3 * std::sqrt((syy / n - my * my) / n));
}

TEST_CASE("disk draws: radial law r^2 uniform")
{
    const Disk d{{5, -5}, 2.0};
    Rng rng = make_rng(1);
    const int n = 50000;
    int inner = 0;
    for (int i = 0; i < n; ++i) {
        const auto p = sample_uniform(d, rng);
        const double r = std::hypot(p.x - 5, p.y + 5);
        CHECK(r <= 2.0);
        if (r < 1.0) ++inner;
    }
    // P(r < R/2) = 1/4
    CHECK(std::abs(inner / double(n) - 0.25) < 5 * std::sqrt(0.25 * 0.75 / n));
}

TEST_CASE("sector membership")
{
    const Sector s{0.0, 120.0};
    const Position3D apex{0, 0, 10};
    CHECK(in_sector(apex, s, {1, 0, 1}));
    CHECK(in_sector(apex, s, {1, 1.7, 1}));   // about 59.5 deg
    CHECK_FALSE(in_sector(apex, s, {1, 1.74, 1}));  // about 60.1 deg
    CHECK_FALSE(in_sector(apex, s, {-1, 0, 1}));
    const Sector wrap{180.0, 120.0};
    CHECK(in_sector(apex, wrap, {-1, -0.1, 1}));
    CHECK(in_sector(apex, wrap, {-1, 0.1, 1}));
}
