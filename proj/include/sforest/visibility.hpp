#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "sforest/geometry.hpp"

namespace sforest {

// Obstacle-avoiding polyline. Interior waypoints are obstacle vertices;
// length is the sum of consecutive waypoint distances.
struct GeodesicPath {
    std::vector<Point2> waypoints;
    double length = 0.0;

    const Point2& source() const { return waypoints.front(); }
    const Point2& target() const { return waypoints.back(); }
};

// Vertices are the bounds corners and obstacle vertices (the "structural"
// prefix) followed by registered query points; edges join every mutually
// visible pair, weighted by Euclidean distance.
class VisibilityGraph {
public:
    static VisibilityGraph build(const MapEnv& map, std::span<const Point2> extra);

    int vertex_count() const { return static_cast<int>(points_.size()); }
    int structural_count() const { return structural_count_; }
    const Point2& point_of(int id) const { return points_[static_cast<std::size_t>(id)]; }
    bool is_structural(int id) const { return id < structural_count_; }
    int find_vertex(const Point2& p) const;  // -1 when absent
    const std::vector<std::pair<int, double>>& neighbors(int id) const {
        return adjacency_[static_cast<std::size_t>(id)];
    }
    std::size_t edge_count() const { return edge_count_; }
    std::uint64_t map_id() const { return map_id_; }

private:
    std::vector<Point2> points_;
    std::vector<std::vector<std::pair<int, double>>> adjacency_;
    std::map<std::pair<std::uint64_t, std::uint64_t>, int> index_;
    int structural_count_ = 0;
    std::size_t edge_count_ = 0;
    std::uint64_t map_id_ = 0;
};

VisibilityGraph build_visibility_graph(const MapEnv& map, std::span<const Point2> extra);

// NP points at equal arclength spacing along the path; first and last equal
// the path endpoints. A zero-length path repeats its point NP times.
std::vector<Point2> resample_path(const GeodesicPath& path, int np);

// Geodesic queries against one map. Vertex-to-vertex paths run A* over the
// visibility graph (deterministic lexicographic tie-break among equal-length
// paths, cached by unordered endpoint pair). Arbitrary free-space points are
// answered via a precomputed all-pairs table over the structural vertices,
// so the Steiner point search can evaluate many candidate positions cheaply.
// Queries are internally synchronized and behave as if serialized.
class GeodesicOracle {
public:
    GeodesicOracle(const MapEnv& map, std::span<const Point2> extra);

    const MapEnv& map() const { return map_; }
    const VisibilityGraph& graph() const { return graph_; }

    bool visible(const Point2& a, const Point2& b) const;

    // A* between graph vertices. Throws ValidationError when an endpoint is
    // not a vertex and NoPathError when disconnected.
    GeodesicPath shortest_path(int src, int dst) const;
    GeodesicPath shortest_path(const Point2& src, const Point2& dst) const;

    // Geodesic between arbitrary free-space points (graph vertices allowed).
    double length_between(const Point2& a, const Point2& b) const;
    GeodesicPath path_between(const Point2& a, const Point2& b) const;

    // Milliseconds spent answering path queries (A*, distance fields).
    double paths_ms() const { return paths_ms_; }

private:
    struct Field {
        std::vector<double> dist;  // dist[w]: geodesic from structural w to the point
        std::vector<int> via;      // structural vertex adjacent to the point, -1 = none
    };

    const Field& field_of(const Point2& p) const;
    GeodesicPath astar(int src, int dst) const;
    std::vector<int> structural_chain(int from, int to) const;

    MapEnv map_;
    VisibilityGraph graph_;
    std::vector<double> table_;  // all-pairs geodesic lengths over structural vertices
    std::vector<int> next_hop_;  // Floyd-Warshall successor matrix
    int s_ = 0;                  // structural vertex count

    mutable std::mutex cache_mutex_;
    mutable std::map<std::pair<int, int>, GeodesicPath> path_cache_;
    mutable std::map<std::pair<std::uint64_t, std::uint64_t>, std::unique_ptr<Field>> field_cache_;
    mutable double paths_ms_ = 0.0;
};

}  // namespace sforest
