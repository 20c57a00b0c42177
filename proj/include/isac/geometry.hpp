#pragma once

#include <cmath>
#include <vector>

namespace isac {

struct Position3D {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Position3D&, const Position3D&) = default;
};

inline double distance(const Position3D& a, const Position3D& b)
{
    return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 horizontal(const Position3D& p) { return {p.x, p.y}; }

/// Half-plane {p : normal . p <= offset}.
struct HalfPlane {
    Point2 normal;
    double offset = 0.0;

    bool contains(Point2 p, double tol = 0.0) const
    {
        return normal.x * p.x + normal.y * p.y <= offset + tol;
    }
};

/// Convex polygon with counter-clockwise vertices.
class ConvexPolygon {
public:
    ConvexPolygon() = default;
    explicit ConvexPolygon(std::vector<Point2> ccw_vertices) : vertices_(std::move(ccw_vertices)) {}

    static ConvexPolygon axis_aligned_box(double xmin, double ymin, double xmax, double ymax);

    const std::vector<Point2>& vertices() const { return vertices_; }
    bool empty() const { return vertices_.size() < 3 || area() <= 0.0; }

    double area() const;
    Point2 centroid() const;
    bool contains(Point2 p, double tol = 1e-9) const;

    /// Sutherland-Hodgman clip against one half-plane.
    ConvexPolygon clipped(const HalfPlane& hp) const;

    struct Bounds {
        double xmin, ymin, xmax, ymax;
    };
    Bounds bounds() const;

private:
    std::vector<Point2> vertices_;
};

}  // namespace isac
