#pragma once

#include "isac/geometry.hpp"
#include "isac/rng.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace isac::scenario {

class DeploymentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct DeploymentConfig {
    int num_bs = 3;
    double bs_height_m = 10.0;
    double ue_height_m = 1.0;
    double target_height_m = 1.0;
    double inter_bs_distance_m = 200.0;
    double comm_coverage_radius_m = 100.0;
    double sector_width_deg = 120.0;
    std::vector<double> sector_boresights_deg;  // one per BS

    /// Throws DeploymentError naming the offending field.
    void validate() const;
};

/// Boresights pointing from each ring position toward the ring center.
std::vector<double> boresights_toward_centroid(int num_bs);

/// Default deployment for `num_bs` BSs with boresights toward the centroid.
DeploymentConfig default_deployment(int num_bs = 3);

struct Disk {
    Point2 center;
    double radius = 0.0;

    bool contains(Point2 p, double tol = 1e-9) const
    {
        return std::hypot(p.x - center.x, p.y - center.y) <= radius + tol;
    }
};

struct Sector {
    double boresight_deg = 0.0;
    double width_deg = 120.0;
};

/// True if the horizontal direction apex->point lies inside the sector.
bool in_sector(const Position3D& apex, const Sector& sector, const Position3D& point);

struct DeploymentTemplate {
    std::vector<Position3D> bs_positions;
    std::vector<Sector> sectors;
    ConvexPolygon sensing_region;
    std::vector<Disk> comm_regions;
    double ue_height_m = 1.0;
    double target_height_m = 1.0;

    std::size_t num_bs() const { return bs_positions.size(); }
};

struct NetworkScenario {
    std::vector<Position3D> bs_positions;
    std::vector<Sector> sectors;
    std::vector<Position3D> ue_positions;  // ue_positions[m] is served by bs_positions[m]
    Position3D target_position;
    ConvexPolygon sensing_region;
    std::vector<Disk> comm_regions;

    std::size_t num_bs() const { return bs_positions.size(); }
};

/// Places the BS ring and derives the sensing hexagon (intersection of the
/// BS sectors) and communication disks. Throws DeploymentError if the sector
/// intersection is empty or unbounded.
DeploymentTemplate build_deployment(const DeploymentConfig& cfg);

struct SamplingStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

Point2 sample_uniform(const ConvexPolygon& region, Rng& rng, SamplingStats* stats = nullptr);
Point2 sample_uniform(const Disk& region, Rng& rng, SamplingStats* stats = nullptr);

/// UEs uniform in their serving disk, target uniform in the sensing region.
NetworkScenario sample_realization(const DeploymentTemplate& tmpl, Rng& rng);

}  // namespace isac::scenario
