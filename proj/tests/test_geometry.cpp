#include "isac/geometry.hpp"
#include "isac/units.hpp"

#include <doctest.h>

#include <cmath>

using namespace isac;
using doctest::Approx;

TEST_CASE("box area and centroid")
{
    const auto b = ConvexPolygon::axis_aligned_box(-1, 0, 3, 2);
    CHECK(b.area() == Approx(8.0));
    CHECK(b.centroid().x == Approx(1.0));
    CHECK(b.centroid().y == Approx(1.0));
    CHECK(b.contains({0, 1}));
    CHECK_FALSE(b.contains({4, 1}));
}

TEST_CASE("clipping a square by a diagonal half-plane")
{
    const auto sq = ConvexPolygon::axis_aligned_box(0, 0, 1, 1);
    // x + y <= 1 keeps the lower-left triangle
    const auto tri = sq.clipped({{1.0, 1.0}, 1.0});
    CHECK(tri.vertices().size() == 3);
    CHECK(tri.area() == Approx(0.5));
    CHECK(tri.centroid().x == Approx(1.0 / 3));
    CHECK(tri.contains({0.2, 0.2}));
    CHECK_FALSE(tri.contains({0.8, 0.8}));
}

TEST_CASE("clipping away everything leaves an empty polygon")
{
    const auto sq = ConvexPolygon::axis_aligned_box(0, 0, 1, 1);
    CHECK(sq.clipped({{1.0, 0.0}, -1.0}).empty());
    // a half-plane containing the square changes nothing
    CHECK(sq.clipped({{1.0, 0.0}, 5.0}).area() == Approx(1.0));
}

TEST_CASE("regular hexagon centroid")
{
    std::vector<Point2> v;
    for (int i = 0; i < 6; ++i) v.push_back({3 + 2 * std::cos(i * kPi / 3), -1 + 2 * std::sin(i * kPi / 3)});
    const ConvexPolygon hex(v);
    CHECK(hex.area() == Approx(1.5 * std::sqrt(3.0) * 4));
    CHECK(hex.centroid().x == Approx(3.0));
    CHECK(hex.centroid().y == Approx(-1.0));
    const auto bb = hex.bounds();
    CHECK(bb.xmax - bb.xmin == Approx(4.0));
}

TEST_CASE("3D distance")
{
    CHECK(distance({0, 0, 10}, {3, 4, 10}) == Approx(5.0));
    CHECK(distance({0, 0, 0}, {1, 2, 2}) == Approx(3.0));
}
