#include "isac/geometry.hpp"

#include <algorithm>
#include <limits>

namespace isac {

ConvexPolygon ConvexPolygon::axis_aligned_box(double xmin, double ymin, double xmax, double ymax)
{
    return ConvexPolygon({{xmin, ymin}, {xmax, ymin}, {xmax, ymax}, {xmin, ymax}});
}

double ConvexPolygon::area() const
{
    const auto n = vertices_.size();
    if (n < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = vertices_[i];
        const auto& b = vertices_[(i + 1) % n];
        twice += a.x * b.y - b.x * a.y;
    }
    return 0.5 * twice;
}

Point2 ConvexPolygon::centroid() const
{
    const auto n = vertices_.size();
    double cx = 0.0, cy = 0.0, twice = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = vertices_[i];
        const auto& b = vertices_[(i + 1) % n];
        const double cross = a.x * b.y - b.x * a.y;
        twice += cross;
        cx += (a.x + b.x) * cross;
        cy += (a.y + b.y) * cross;
    }
    return {cx / (3.0 * twice), cy / (3.0 * twice)};
}

bool ConvexPolygon::contains(Point2 p, double tol) const
{
    const auto n = vertices_.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = vertices_[i];
        const auto& b = vertices_[(i + 1) % n];
        const double ex = b.x - a.x, ey = b.y - a.y;
        const double len = std::hypot(ex, ey);
        // signed distance to the left of edge a->b
        const double side = (ex * (p.y - a.y) - ey * (p.x - a.x)) / len;
        if (side < -tol) return false;
    }
    return true;
}

ConvexPolygon ConvexPolygon::clipped(const HalfPlane& hp) const
{
    std::vector<Point2> out;
    const auto n = vertices_.size();
    auto value = [&](Point2 p) { return hp.normal.x * p.x + hp.normal.y * p.y - hp.offset; };
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 cur = vertices_[i];
        const Point2 nxt = vertices_[(i + 1) % n];
        const double vc = value(cur);
        const double vn = value(nxt);
        if (vc <= 0.0) out.push_back(cur);
        if ((vc < 0.0 && vn > 0.0) || (vc > 0.0 && vn < 0.0)) {
            const double t = vc / (vc - vn);
            out.push_back({cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)});
        }
    }
    // drop near-duplicate consecutive vertices produced by clipping through a vertex
    std::vector<Point2> dedup;
    for (const auto& p : out) {
        if (dedup.empty() || std::hypot(p.x - dedup.back().x, p.y - dedup.back().y) > 1e-12)
            dedup.push_back(p);
    }
    while (dedup.size() > 1 &&
           std::hypot(dedup.front().x - dedup.back().x, dedup.front().y - dedup.back().y) <= 1e-12)
        dedup.pop_back();
    return ConvexPolygon(std::move(dedup));
}

ConvexPolygon::Bounds ConvexPolygon::bounds() const
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    Bounds b{inf, inf, -inf, -inf};
    for (const auto& v : vertices_) {
        b.xmin = std::min(b.xmin, v.x);
        b.ymin = std::min(b.ymin, v.y);
        b.xmax = std::max(b.xmax, v.x);
        b.ymax = std::max(b.ymax, v.y);
    }
    return b;
}

}  // namespace isac
