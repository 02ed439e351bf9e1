#include <doctest.h>

#include "sforest/errors.hpp"
#include "sforest/geometry.hpp"
#include "sforest/rng.hpp"

using namespace sforest;

namespace {

Polygon unit_square() { return Polygon{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}; }

MapEnv map_with_square_obstacle() {
    MapEnv map;
    map.side = 10.0;
    map.obstacles.push_back(Polygon{{{4, 4}, {6, 4}, {6, 6}, {4, 6}}});
    validate_map(map);
    return map;
}

}  // namespace

TEST_CASE("point_in_polygon: interior, boundary, exterior") {
    const Polygon sq = unit_square();
    CHECK(point_in_polygon({0.5, 0.5}, sq, 1e-9));
    CHECK_FALSE(point_in_polygon({0.0, 0.0}, sq, 1e-9));  // vertex is boundary
    CHECK_FALSE(point_in_polygon({2.0, 2.0}, sq, 1e-9));
    CHECK_FALSE(point_in_polygon({0.5, 0.0}, sq, 1e-9));  // edge is boundary
}

TEST_CASE("point_in_polygon rejects degenerate polygons") {
    Polygon degenerate{{{0, 0}, {1, 1}}};
    CHECK_THROWS_AS(point_in_polygon({0.5, 0.5}, degenerate, 1e-9), ValidationError);
}

TEST_CASE("segment_blocked: crossing, clear, grazing") {
    const MapEnv map = map_with_square_obstacle();
    CHECK(segment_blocked({2, 5}, {8, 5}, map));        // through the centroid
    CHECK_FALSE(segment_blocked({1, 1}, {9, 1}, map));  // clear of the obstacle
    CHECK_FALSE(segment_blocked({2, 4}, {8, 4}, map));  // slides along the bottom edge
    CHECK_FALSE(segment_blocked({2, 2}, {4, 4}, map));  // ends on a vertex
}

TEST_CASE("segment coincident with an obstacle edge is not blocked") {
    const MapEnv map = map_with_square_obstacle();
    const Point2 p{4, 4}, q{6, 4};
    // Offset-sampling oracle: no interior parameter point is strictly inside.
    for (int k = 1; k < 100; ++k) {
        const double t = k / 100.0;
        CHECK_FALSE(point_in_polygon(p + (q - p) * t, map.obstacles[0], map.eps()));
    }
    CHECK_FALSE(segment_blocked(p, q, map));
}

TEST_CASE("segment through a vertex into the interior is blocked") {
    const MapEnv map = map_with_square_obstacle();
    CHECK(segment_blocked({2, 2}, {8, 8}, map));  // diagonal through corner (4,4) into interior
}

TEST_CASE("segment_blocked is symmetric") {
    const MapEnv map = map_with_square_obstacle();
    Xoshiro256StarStar rng(99, 0);
    for (int i = 0; i < 200; ++i) {
        const Point2 p{rng.uniform(0, 10), rng.uniform(0, 10)};
        const Point2 q{rng.uniform(0, 10), rng.uniform(0, 10)};
        CHECK(segment_blocked(p, q, map) == segment_blocked(q, p, map));
    }
}

TEST_CASE("convex_hull drops interior points") {
    const std::vector<Point2> pts{{0, 0}, {1, 0}, {0, 1}, {0.1, 0.1}};
    const Polygon hull = convex_hull(pts);
    REQUIRE(hull.vertices.size() == 3);
    CHECK(hull.vertices[0] == Point2{0, 0});
    CHECK(hull.signed_area() > 0);  // CCW
}

TEST_CASE("convex_hull degenerate cases") {
    const Polygon single = convex_hull(std::vector<Point2>{{2, 3}});
    CHECK(single.degenerate());
    CHECK(single.vertices.size() == 1);

    const Polygon collinear = convex_hull(std::vector<Point2>{{0, 0}, {1, 1}, {2, 2}});
    CHECK(collinear.degenerate());
    REQUIRE(collinear.vertices.size() == 2);
    CHECK(collinear.vertices[0] == Point2{0, 0});
    CHECK(collinear.vertices[1] == Point2{2, 2});

    CHECK_THROWS_AS(convex_hull(std::vector<Point2>{}), ValidationError);
}

TEST_CASE("convex_hull contains its input and is idempotent") {
    Xoshiro256StarStar rng(7, 0);
    std::vector<Point2> pts;
    for (int i = 0; i < 100; ++i) {
        const double ang = rng.uniform(0, 6.283185307179586);
        const double r = std::sqrt(rng.uniform01());
        pts.push_back({r * std::cos(ang), r * std::sin(ang)});
    }
    const Polygon hull = convex_hull(pts);
    for (const Point2& p : pts) CHECK(point_in_convex(p, hull, 1e-9));

    const Polygon again = convex_hull(hull.vertices);
    REQUIRE(again.vertices.size() == hull.vertices.size());
    for (std::size_t i = 0; i < hull.vertices.size(); ++i)
        CHECK(again.vertices[i] == hull.vertices[i]);
}

TEST_CASE("inflate_degenerate_hull yields a usable 2D region") {
    const Polygon thin = inflate_degenerate_hull(convex_hull(std::vector<Point2>{{0, 0}, {2, 0}}), 0.5);
    REQUIRE(thin.vertices.size() == 4);
    CHECK(thin.area() == doctest::Approx(2.0));
    CHECK(point_in_convex({1, 0}, thin, 1e-12));
}

TEST_CASE("validate_map rejects broken inputs") {
    MapEnv outside;
    outside.side = 10;
    outside.obstacles.push_back(Polygon{{{8, 8}, {12, 8}, {12, 12}, {8, 12}}});
    CHECK_THROWS_AS(validate_map(outside), ValidationError);

    MapEnv clockwise;
    clockwise.side = 10;
    clockwise.obstacles.push_back(Polygon{{{4, 4}, {4, 6}, {6, 6}, {6, 4}}});
    CHECK_THROWS_AS(validate_map(clockwise), ValidationError);

    MapEnv overlapping;
    overlapping.side = 10;
    overlapping.obstacles.push_back(Polygon{{{3, 3}, {6, 3}, {6, 6}, {3, 6}}});
    overlapping.obstacles.push_back(Polygon{{{5, 5}, {8, 5}, {8, 8}, {5, 8}}});
    CHECK_THROWS_AS(validate_map(overlapping), ValidationError);

    MapEnv self_crossing;
    self_crossing.side = 10;
    self_crossing.obstacles.push_back(Polygon{{{2, 2}, {6, 6}, {6, 2}, {2, 6}}});
    CHECK_THROWS_AS(validate_map(self_crossing), ValidationError);
}

TEST_CASE("convex_overlap basic cases") {
    const Polygon a{{{0, 0}, {2, 0}, {2, 2}, {0, 2}}};
    const Polygon b{{{1, 1}, {3, 1}, {3, 3}, {1, 3}}};
    const Polygon c{{{5, 5}, {6, 5}, {6, 6}, {5, 6}}};
    CHECK(convex_overlap(a, b, 1e-9));
    CHECK_FALSE(convex_overlap(a, c, 1e-9));
    // Touching counts as overlap.
    const Polygon d{{{2, 0}, {4, 0}, {4, 2}, {2, 2}}};
    CHECK(convex_overlap(a, d, 1e-9));
}
