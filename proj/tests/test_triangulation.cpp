#include <doctest.h>

#include "sforest/errors.hpp"
#include "sforest/mapgen.hpp"
#include "sforest/rng.hpp"
#include "sforest/triangulation.hpp"

using namespace sforest;

TEST_CASE("empty map splits the square into two triangles") {
    MapEnv map;
    map.side = 200.0;
    const FreeSpaceTriangulation tri = triangulate_free_space(map);
    REQUIRE(tri.triangles.size() == 2);
    double area = 0.0;
    for (const Triangle& t : tri.triangles) area += t.area();
    CHECK(area == doctest::Approx(200.0 * 200.0).epsilon(1e-12));
}

TEST_CASE("square with a triangular hole") {
    MapEnv map;
    map.side = 10.0;
    map.obstacles.push_back(Polygon{{{3, 3}, {7, 3.5}, {5, 6}}});
    const FreeSpaceTriangulation tri = triangulate_free_space(map);
    CHECK(tri.triangles.size() >= 7);

    double area = 0.0;
    for (const Triangle& t : tri.triangles) area += t.area();
    const double expected = 100.0 - map.obstacles[0].area();
    CHECK(area == doctest::Approx(expected).epsilon(1e-9));

    // No triangle centroid may sit inside the hole.
    for (const Triangle& t : tri.triangles)
        CHECK_FALSE(point_in_polygon(t.centroid(), map.obstacles[0], map.eps()));
}

TEST_CASE("paper-scale maps triangulate with the area identity") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        ScenarioSpec spec;
        spec.seed = seed;
        const MapEnv map = generate_map(spec);
        const FreeSpaceTriangulation tri = triangulate_free_space(map);
        double area = 0.0;
        for (const Triangle& t : tri.triangles) area += t.area();
        double expected = map.side * map.side;
        for (const Polygon& poly : map.obstacles) expected -= poly.area();
        CHECK(std::abs(area - expected) <= 1e-6 * map.side * map.side);
        // Constrained edges keep triangles from straddling boundaries, so a
        // centroid either clears every obstacle or the triangle was dropped.
        for (const Triangle& t : tri.triangles) {
            int strict_inside = 0;
            for (const Polygon& poly : map.obstacles)
                if (point_in_polygon(t.centroid(), poly, map.eps())) ++strict_inside;
            CHECK(strict_inside == 0);
        }
    }
}

TEST_CASE("overlapping obstacles are rejected") {
    MapEnv map;
    map.side = 10.0;
    map.obstacles.push_back(Polygon{{{2, 2}, {6, 2}, {6, 6}, {2, 6}}});
    map.obstacles.push_back(Polygon{{{4, 4}, {8, 4}, {8, 8}, {4, 8}}});
    CHECK_THROWS_AS(triangulate_free_space(map), ValidationError);
}

TEST_CASE("barycentric mapping corner cases match the encoding") {
    FreeSpaceTriangulation tri;
    tri.triangles.push_back(Triangle{0, {0, 0}, {1, 0}, {0, 1}});

    const Point2 a = barycentric_to_cartesian({0, 0.0, 0.7}, tri);
    CHECK(a == Point2{0, 0});  // r1 = 0 collapses to vertex a

    const Point2 c = barycentric_to_cartesian({0, 1.0, 1.0}, tri);
    CHECK(c == Point2{0, 1});

    const Point2 mid = barycentric_to_cartesian({0, 0.25, 0.5}, tri);
    CHECK(mid.x == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(mid.y == doctest::Approx(0.25).epsilon(1e-15));

    CHECK_THROWS_AS(barycentric_to_cartesian({5, 0.5, 0.5}, tri), ValidationError);
    CHECK_THROWS_AS(barycentric_to_cartesian({0, 1.5, 0.5}, tri), ValidationError);
}

TEST_CASE("sampled barycentric points always land inside their triangle") {
    ScenarioSpec spec;
    spec.seed = 4;
    const MapEnv map = generate_map(spec);
    const FreeSpaceTriangulation tri = triangulate_free_space(map);
    Xoshiro256StarStar rng(12345, 0);
    for (int i = 0; i < 10000; ++i) {
        BarycentricCoord bc;
        bc.tri = static_cast<int>(rng.next() % tri.triangles.size());
        bc.r1 = rng.uniform01();
        bc.r2 = rng.uniform01();
        const Point2 p = barycentric_to_cartesian(bc, tri);
        CHECK(point_in_triangle(p, tri.triangles[static_cast<std::size_t>(bc.tri)], 1e-9 * map.side));
    }
}

TEST_CASE("cartesian_to_barycentric inverts the sampling map") {
    MapEnv map;
    map.side = 10.0;
    map.obstacles.push_back(Polygon{{{3, 3}, {7, 3.5}, {5, 6}}});
    const FreeSpaceTriangulation tri = triangulate_free_space(map);
    Xoshiro256StarStar rng(5, 0);
    for (int i = 0; i < 500; ++i) {
        BarycentricCoord bc;
        bc.tri = static_cast<int>(rng.next() % tri.triangles.size());
        bc.r1 = rng.uniform01();
        bc.r2 = rng.uniform01();
        const Point2 p = barycentric_to_cartesian(bc, tri);
        const auto back = cartesian_to_barycentric(p, tri, map.eps());
        REQUIRE(back.has_value());
        const Point2 q = barycentric_to_cartesian(*back, tri);
        CHECK(distance(p, q) <= 1e-9 * map.side);
    }
}
