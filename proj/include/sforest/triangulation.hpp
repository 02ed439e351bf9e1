#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sforest/geometry.hpp"

namespace sforest {

struct Triangle {
    int index = 0;
    Point2 a, b, c;

    Point2 centroid() const { return (a + b + c) * (1.0 / 3.0); }
    double area() const { return 0.5 * std::abs(cross(b - a, c - a)); }
};

// Triangles covering the free space (bounds minus obstacle interiors).
// Indices are dense 0..T-1; no triangle straddles an obstacle boundary.
struct FreeSpaceTriangulation {
    std::vector<Triangle> triangles;
    std::uint64_t map_id = 0;
};

// Steiner point encoding: a triangle index plus two unit-interval knobs.
struct BarycentricCoord {
    int tri = 0;
    double r1 = 0.0;
    double r2 = 0.0;
};

// Constrained Delaunay triangulation of the bounds square with the obstacle
// boundaries as constraint edges; triangles whose centroid falls inside an
// obstacle are dropped. Verifies the covered-area identity before returning.
FreeSpaceTriangulation triangulate_free_space(const MapEnv& map);

// (tau, r1, r2) -> (1-sqrt(r1))*a + sqrt(r1)*(1-r2)*b + sqrt(r1)*r2*c.
// The image is exactly triangle tau, so sampled points are feasible by
// construction. Throws ValidationError for out-of-range inputs.
Point2 barycentric_to_cartesian(const BarycentricCoord& r, const FreeSpaceTriangulation& tri);

// Inverse mapping used to warm-start searches from a Cartesian point; finds
// the first triangle containing p. Empty when p lies outside every triangle.
std::optional<BarycentricCoord> cartesian_to_barycentric(const Point2& p,
                                                         const FreeSpaceTriangulation& tri,
                                                         double eps);

bool point_in_triangle(const Point2& p, const Triangle& t, double eps);

double distance_point_triangle(const Point2& p, const Triangle& t);

}  // namespace sforest
