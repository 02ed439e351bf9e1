#pragma once

#include <span>
#include <vector>

#include "sforest/clustering.hpp"
#include "sforest/geometry.hpp"
#include "sforest/triangulation.hpp"
#include "sforest/visibility.hpp"

namespace sforest {

// One cluster of terminals served by a single tree. The root is always one
// of the terminals, indexed into `terminals`; `terminal_ids` carries the
// global terminal indices in the same order.
struct Module {
    int id = 0;
    std::vector<int> terminal_ids;
    std::vector<Point2> terminals;
    int root_index = 0;

    const Point2& root() const { return terminals[static_cast<std::size_t>(root_index)]; }
    std::size_t size() const { return terminals.size(); }
};

enum class NodeKind { terminal, root, steiner };

// Rooted tree over the module's terminals plus inserted Steiner points.
// Edges carry the full obstacle-avoiding polyline.
struct SteinerTree {
    struct Node {
        Point2 point;
        NodeKind kind = NodeKind::terminal;
        int terminal_id = -1;  // -1 for Steiner nodes
    };
    struct Edge {
        int a = 0;
        int b = 0;
        GeodesicPath polyline;
    };
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    int root_node = 0;
    double total_length = 0.0;
};

struct BundleParams {
    int np = 20;                      // resampling points for the path metric
    int max_refine_iters = 3;         // top-down sweep budget
    double improvement_tol = 1e-3;    // relative gain needed to accept/continue
    int candidate_triangle_cap = 64;  // triangles searched per Steiner point
};

enum class RootMetric { euclidean, geodesic };

struct BuildStats {
    double optimize_ms = 0.0;  // Steiner point search time, path queries excluded
};

// Shared immutable scenario data threaded through tree construction.
struct PlannerContext {
    const MapEnv* map = nullptr;
    const FreeSpaceTriangulation* tri = nullptr;
    const GeodesicOracle* oracle = nullptr;
    BundleParams params;
    Linkage path_linkage = Linkage::complete;
    BuildStats* stats = nullptr;  // optional
};

// Terminal minimizing the summed Euclidean distance to the others; ties go
// to the lowest index.
int select_root(std::span<const Point2> terminals);

// Same criterion with geodesic distances (all terminals must be registered).
int select_root_geodesic(std::span<const Point2> terminals, const GeodesicOracle& oracle);

// One geodesic from the root to every other terminal; empty for singletons.
std::vector<GeodesicPath> build_path_set(const Module& m, const GeodesicOracle& oracle);

struct SteinerCandidate {
    Point2 point;
    double cost = 0.0;  // summed geodesic length to the attached points
};

// Finds the point minimizing the summed geodesic distance to `attached`.
// Enumerates free-space triangles overlapping `region` (nearest-first, capped
// at candidate_triangle_cap), runs a derivative-free pattern search over the
// (r1, r2) encoding inside each, and seeds extra descents from `warm_starts`.
// Throws NoCandidateError when the region misses the free space entirely.
SteinerCandidate optimize_steiner_point(std::span<const Point2> attached, const Polygon& region,
                                        const PlannerContext& ctx,
                                        std::span<const Point2> warm_starts = {});

// Builds the module's tree: route root-to-terminal geodesics, cluster them
// with the path metric, bundle bottom-up over the resulting dendrogram
// (accepting a Steiner point only when it shortens the connection), then
// refine accepted points top-down and splice out junctions of degree < 3.
SteinerTree build_tree(const Module& m, const PlannerContext& ctx,
                       std::span<const Point2> warm_starts = {});

// Structural checks shared by tests and callers: spanning, acyclicity,
// Steiner degrees, unblocked polylines, length bookkeeping. Throws
// ValidationError describing the first violation.
void validate_tree(const SteinerTree& tree, const Module& m, const MapEnv& map);

}  // namespace sforest
