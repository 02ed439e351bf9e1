#include "sforest/mapgen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sforest/errors.hpp"
#include "sforest/rng.hpp"

namespace sforest {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

bool polygons_clear(const Polygon& a, const Polygon& b, double margin, double eps) {
    if (point_in_polygon(a.vertices[0], b, eps) || point_in_polygon(b.vertices[0], a, eps))
        return false;
    const std::size_t na = a.vertices.size(), nb = b.vertices.size();
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j)
            if (distance_segment_segment(a.vertices[i], a.vertices[(i + 1) % na],
                                         b.vertices[j], b.vertices[(j + 1) % nb]) < margin)
                return false;
    return true;
}

}  // namespace

MapEnv generate_map(const ScenarioSpec& spec) {
    if (spec.side <= 0 || spec.n_obstacles < 0 || spec.obstacle_edges < 3)
        throw ValidationError("scenario: side must be positive and obstacles need >= 3 edges");

    MapEnv map;
    map.side = spec.side;
    const double side = spec.side;
    const double r_lo = 0.05 * side, r_hi = 0.15 * side;
    const double clearance = 0.01 * side;
    // Keep center + max radius + clearance strictly inside the bounds.
    const double margin = r_hi + clearance;

    Xoshiro256StarStar rng(spec.seed, kStreamObstacles);
    const int edges = spec.obstacle_edges;
    std::vector<double> angles(edges), radii(edges);

    for (int oi = 0; oi < spec.n_obstacles; ++oi) {
        bool placed = false;
        for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
            // Draw order is part of the format: cx, cy, angles, radii.
            const double cx = rng.uniform(margin, side - margin);
            const double cy = rng.uniform(margin, side - margin);
            for (double& a : angles) a = rng.uniform(0.0, kTau);
            for (double& r : radii) r = rng.uniform(r_lo, r_hi);
            std::sort(angles.begin(), angles.end());

            Polygon poly;
            poly.vertices.reserve(edges);
            for (int k = 0; k < edges; ++k)
                poly.vertices.push_back({cx + radii[k] * std::cos(angles[k]),
                                         cy + radii[k] * std::sin(angles[k])});

            // Reject near-degenerate shapes (almost-coincident angles).
            bool degenerate = false;
            for (int k = 0; k < edges && !degenerate; ++k)
                if (distance(poly.vertices[k], poly.vertices[(k + 1) % edges]) < 1e-4 * side)
                    degenerate = true;
            if (degenerate || poly.signed_area() < 1e-6 * side * side) continue;
            if (!polygon_is_simple(poly, map.eps())) continue;

            bool clear = true;
            for (const Polygon& other : map.obstacles)
                if (!polygons_clear(poly, other, clearance, map.eps())) {
                    clear = false;
                    break;
                }
            if (!clear) continue;

            map.obstacles.push_back(std::move(poly));
            placed = true;
        }
        if (!placed)
            throw GenerationError("mapgen: could not place obstacle " + std::to_string(oi) +
                                  " within 10000 attempts");
    }

    validate_map(map);
    return map;
}

std::vector<Point2> generate_terminals(const MapEnv& map, int n, std::uint64_t seed) {
    if (n < 0) throw ValidationError("generate_terminals: negative count");
    const double sep = 1e-3 * map.side;
    Xoshiro256StarStar rng(seed, kStreamTerminals);
    std::vector<Point2> out;
    out.reserve(static_cast<std::size_t>(n));
    long draws = 0;
    while (static_cast<int>(out.size()) < n) {
        if (++draws > 1000000)
            throw GenerationError("generate_terminals: rejection sampling exhausted 10^6 draws");
        const Point2 p{rng.uniform(0.0, map.side), rng.uniform(0.0, map.side)};
        bool ok = true;
        for (const Polygon& poly : map.obstacles)
            if (point_in_polygon(p, poly, map.eps())) {
                ok = false;
                break;
            }
        for (std::size_t i = 0; i < out.size() && ok; ++i)
            if (distance(p, out[i]) < sep) ok = false;
        if (ok) out.push_back(p);
    }
    return out;
}

}  // namespace sforest
