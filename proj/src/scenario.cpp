#include "isac/scenario.hpp"

#include "isac/units.hpp"

#include <cmath>
#include <random>

namespace isac::scenario {

namespace {

double ring_azimuth(int k, int num_bs) { return kPi / 2.0 + 2.0 * kPi * k / num_bs; }

double wrap_deg(double a)
{
    a = std::fmod(a, 360.0);
    if (a > 180.0) a -= 360.0;
    if (a <= -180.0) a += 360.0;
    return a;
}

void require(bool ok, const std::string& msg)
{
    if (!ok) throw DeploymentError(msg);
}

}  // namespace

void DeploymentConfig::validate() const
{
    require(num_bs >= 2, "deployment.num_bs: must be >= 2");
    require(std::isfinite(bs_height_m) && bs_height_m > 0.0, "deployment.bs_height_m: must be > 0");
    require(std::isfinite(ue_height_m) && ue_height_m > 0.0, "deployment.ue_height_m: must be > 0");
    require(std::isfinite(target_height_m) && target_height_m > 0.0,
            "deployment.target_height_m: must be > 0");
    require(std::isfinite(inter_bs_distance_m) && inter_bs_distance_m > 0.0,
            "deployment.inter_bs_distance_m: must be > 0");
    require(std::isfinite(comm_coverage_radius_m) && comm_coverage_radius_m > 0.0,
            "deployment.comm_coverage_radius_m: must be > 0");
    require(sector_width_deg > 0.0 && sector_width_deg <= 360.0,
            "deployment.sector_width_deg: must lie in (0, 360]");
    require(static_cast<int>(sector_boresights_deg.size()) == num_bs,
            "deployment.sector_boresights_deg: need exactly num_bs entries");
    for (double b : sector_boresights_deg)
        require(std::isfinite(b), "deployment.sector_boresights_deg: entries must be finite");
}

std::vector<double> boresights_toward_centroid(int num_bs)
{
    std::vector<double> out;
    out.reserve(num_bs);
    for (int k = 0; k < num_bs; ++k)
        out.push_back(wrap_deg(ring_azimuth(k, num_bs) * 180.0 / kPi + 180.0));
    return out;
}

DeploymentConfig default_deployment(int num_bs)
{
    DeploymentConfig cfg;
    cfg.num_bs = num_bs;
    cfg.sector_boresights_deg = boresights_toward_centroid(num_bs);
    return cfg;
}

bool in_sector(const Position3D& apex, const Sector& sector, const Position3D& point)
{
    if (sector.width_deg >= 360.0) return true;
    const double dx = point.x - apex.x;
    const double dy = point.y - apex.y;
    if (dx == 0.0 && dy == 0.0) return true;  // directly below/above the mast
    const double az = std::atan2(dy, dx) * 180.0 / kPi;
    return std::abs(wrap_deg(az - sector.boresight_deg)) <= 0.5 * sector.width_deg + 1e-9;
}

DeploymentTemplate build_deployment(const DeploymentConfig& cfg)
{
    cfg.validate();
    require(cfg.sector_width_deg <= 180.0,
            "deployment.sector_width_deg: sectors wider than 180 deg do not form a convex sensing region");

    DeploymentTemplate t;
    t.ue_height_m = cfg.ue_height_m;
    t.target_height_m = cfg.target_height_m;

    const double radius = cfg.inter_bs_distance_m / (2.0 * std::sin(kPi / cfg.num_bs));
    for (int k = 0; k < cfg.num_bs; ++k) {
        const double az = ring_azimuth(k, cfg.num_bs);
        t.bs_positions.push_back({radius * std::cos(az), radius * std::sin(az), cfg.bs_height_m});
        t.sectors.push_back({cfg.sector_boresights_deg[k], cfg.sector_width_deg});
        t.comm_regions.push_back({{t.bs_positions.back().x, t.bs_positions.back().y},
                                  cfg.comm_coverage_radius_m});
    }

    const double clip = 20.0 * radius + cfg.comm_coverage_radius_m;
    ConvexPolygon region = ConvexPolygon::axis_aligned_box(-clip, -clip, clip, clip);
    for (int k = 0; k < cfg.num_bs; ++k) {
        const Point2 apex = horizontal(t.bs_positions[k]);
        const double b = deg_to_rad(cfg.sector_boresights_deg[k]);
        const double half = deg_to_rad(0.5 * cfg.sector_width_deg);
        // ccw boundary ray: interior lies clockwise of it
        const Point2 d1{std::cos(b + half), std::sin(b + half)};
        const Point2 n1{-d1.y, d1.x};
        region = region.clipped({n1, n1.x * apex.x + n1.y * apex.y});
        // cw boundary ray: interior lies counter-clockwise of it
        const Point2 d2{std::cos(b - half), std::sin(b - half)};
        const Point2 n2{d2.y, -d2.x};
        region = region.clipped({n2, n2.x * apex.x + n2.y * apex.y});
        if (region.empty()) break;
    }
    require(!region.empty(), "deployment: sector boresights leave an empty sensing region");
    for (const auto& v : region.vertices())
        require(std::abs(v.x) < clip * (1 - 1e-9) && std::abs(v.y) < clip * (1 - 1e-9),
                "deployment: sector boresights leave an unbounded sensing region");
    t.sensing_region = std::move(region);
    return t;
}

Point2 sample_uniform(const ConvexPolygon& region, Rng& rng, SamplingStats* stats)
{
    const auto b = region.bounds();
    std::uniform_real_distribution<double> ux(b.xmin, b.xmax);
    std::uniform_real_distribution<double> uy(b.ymin, b.ymax);
    for (;;) {
        const Point2 p{ux(rng), uy(rng)};
        if (region.contains(p, 0.0)) {
            if (stats) ++stats->accepted;
            return p;
        }
        if (stats) ++stats->rejected;
    }
}

Point2 sample_uniform(const Disk& region, Rng& rng, SamplingStats* stats)
{
    std::uniform_real_distribution<double> u(-region.radius, region.radius);
    for (;;) {
        const double dx = u(rng);
        const double dy = u(rng);
        if (dx * dx + dy * dy <= region.radius * region.radius) {
            if (stats) ++stats->accepted;
            return {region.center.x + dx, region.center.y + dy};
        }
        if (stats) ++stats->rejected;
    }
}

NetworkScenario sample_realization(const DeploymentTemplate& tmpl, Rng& rng)
{
    NetworkScenario s;
    s.bs_positions = tmpl.bs_positions;
    s.sectors = tmpl.sectors;
    s.sensing_region = tmpl.sensing_region;
    s.comm_regions = tmpl.comm_regions;
    s.ue_positions.reserve(tmpl.num_bs());
    for (const auto& disk : tmpl.comm_regions) {
        const Point2 p = sample_uniform(disk, rng);
        s.ue_positions.push_back({p.x, p.y, tmpl.ue_height_m});
    }
    const Point2 t = sample_uniform(tmpl.sensing_region, rng);
    s.target_position = {t.x, t.y, tmpl.target_height_m};
    return s;
}

}  // namespace isac::scenario
