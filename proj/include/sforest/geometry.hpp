#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace sforest {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2() = default;
    Point2(double px, double py) : x(px), y(py) {}

    Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
    Point2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Point2& o) const { return x == o.x && y == o.y; }
    bool operator!=(const Point2& o) const { return !(*this == o); }
};

inline double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Point2& a) { return std::hypot(a.x, a.y); }
inline double distance(const Point2& a, const Point2& b) { return norm(a - b); }

// Lexicographic order (x, then y); the tie-break order used everywhere.
inline bool lex_less(const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
}

// Simple polygon, vertices in counter-clockwise order. Convex hulls of
// collinear point sets are allowed to be degenerate (fewer than 3 vertices).
struct Polygon {
    std::vector<Point2> vertices;

    Polygon() = default;
    explicit Polygon(std::vector<Point2> v) : vertices(std::move(v)) {}

    bool degenerate() const { return vertices.size() < 3; }
    double signed_area() const;
    double area() const { return std::abs(signed_area()); }
    Point2 centroid() const;
};

// Bounded square world with polygonal obstacles. `id` is a content hash used
// to key geodesic caches; identical maps hash identically.
struct MapEnv {
    double side = 200.0;
    std::vector<Polygon> obstacles;
    std::uint64_t id = 0;

    double eps() const { return 1e-9 * side; }
};

// Recomputes the content hash. Call after any mutation.
std::uint64_t map_content_hash(const MapEnv& map);

// Checks polygon simplicity/orientation, strict containment in bounds, and
// pairwise disjointness of obstacles. Throws ValidationError. Also stamps
// the content hash.
void validate_map(MapEnv& map);

double distance_point_segment(const Point2& p, const Point2& a, const Point2& b);
double distance_segment_segment(const Point2& a, const Point2& b,
                                const Point2& c, const Point2& d);

// No repeated/too-close consecutive vertices and no non-adjacent edges
// within eps of each other.
bool polygon_is_simple(const Polygon& poly, double eps);

// Strict interior test; points on the boundary (within eps) are NOT inside.
bool point_in_polygon(const Point2& p, const Polygon& poly, double eps);

// True iff the open segment (p,q) passes through the interior of any
// obstacle. Touching a vertex or sliding along an obstacle edge does not
// block: shortest paths are allowed to graze obstacle boundaries.
bool segment_blocked(const Point2& p, const Point2& q, const MapEnv& map);

// Monotone-chain convex hull, CCW, starting at the lexicographically
// smallest vertex. Collinear inputs produce a degenerate 1- or 2-vertex
// polygon; widen those with inflate_degenerate_hull before using them as a
// 2D search region. Throws ValidationError on empty input.
Polygon convex_hull(std::span<const Point2> pts);

// Expands a degenerate hull into a thin rectangle (or small square) of
// half-width eps so downstream search always has a 2D region.
Polygon inflate_degenerate_hull(const Polygon& hull, double eps);

// Inclusive point-in-convex-polygon test (boundary counts as inside).
bool point_in_convex(const Point2& p, const Polygon& convex, double eps);

// Inclusive overlap test for two convex polygons (separating axis).
bool convex_overlap(const Polygon& a, const Polygon& b, double eps);

}  // namespace sforest
