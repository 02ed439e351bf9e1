#include "sforest/steiner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "sforest/errors.hpp"

namespace sforest {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Barycentric start whose image is the triangle centroid:
// sqrt(4/9) = 2/3 gives coefficients (1/3, 1/3, 1/3).
constexpr double kCentroidR1 = 4.0 / 9.0;
constexpr double kCentroidR2 = 0.5;

Polygon triangle_polygon(const Triangle& t) { return Polygon{{t.a, t.b, t.c}}; }

}  // namespace

int select_root(std::span<const Point2> terminals) {
    if (terminals.empty()) throw ValidationError("select_root: no terminals");
    int best = 0;
    double best_sum = kInf;
    for (std::size_t i = 0; i < terminals.size(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < terminals.size(); ++j)
            if (j != i) sum += distance(terminals[i], terminals[j]);
        if (sum < best_sum) {
            best_sum = sum;
            best = static_cast<int>(i);
        }
    }
    return best;
}

int select_root_geodesic(std::span<const Point2> terminals, const GeodesicOracle& oracle) {
    if (terminals.empty()) throw ValidationError("select_root: no terminals");
    int best = 0;
    double best_sum = kInf;
    for (std::size_t i = 0; i < terminals.size(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < terminals.size(); ++j)
            if (j != i) sum += oracle.shortest_path(terminals[i], terminals[j]).length;
        if (sum < best_sum) {
            best_sum = sum;
            best = static_cast<int>(i);
        }
    }
    return best;
}

std::vector<GeodesicPath> build_path_set(const Module& m, const GeodesicOracle& oracle) {
    std::vector<GeodesicPath> paths;
    if (m.terminals.empty()) throw ValidationError("build_path_set: empty module");
    paths.reserve(m.terminals.size() - 1);
    for (std::size_t i = 0; i < m.terminals.size(); ++i) {
        if (static_cast<int>(i) == m.root_index) continue;
        try {
            paths.push_back(oracle.shortest_path(m.root(), m.terminals[i]));
        } catch (const NoPathError&) {
            throw NoPathError("build_path_set: terminal " +
                              std::to_string(m.terminal_ids[i]) + " at (" +
                              std::to_string(m.terminals[i].x) + ", " +
                              std::to_string(m.terminals[i].y) + ") is unreachable from the root");
        }
    }
    return paths;
}

namespace {

struct Objective {
    std::span<const Point2> attached;
    const GeodesicOracle* oracle;

    // Geodesic sum, skipped via the Euclidean lower bound when it cannot
    // beat `threshold`.
    double eval(const Point2& p, double threshold) const {
        double lb = 0.0;
        for (const Point2& a : attached) lb += distance(p, a);
        if (lb >= threshold) return kInf;
        double sum = 0.0;
        for (const Point2& a : attached) sum += oracle->length_between(p, a);
        return sum;
    }
};

struct Descent {
    Point2 point;
    double cost = kInf;
};

// Compass pattern search over (r1, r2) in [0,1]^2, fixed probe order,
// first-improvement steps, step halving from 0.25 down to 1e-4.
Descent pattern_search(int tri_index, double r1, double r2, const Objective& obj,
                       const FreeSpaceTriangulation& tri) {
    const int kMaxEvals = 4000;
    BarycentricCoord bc{tri_index, std::clamp(r1, 0.0, 1.0), std::clamp(r2, 0.0, 1.0)};
    Point2 p = barycentric_to_cartesian(bc, tri);
    double f = obj.eval(p, kInf);
    int evals = 1;

    double step = 0.25;
    static constexpr double kDir[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    while (step >= 1e-4 && evals < kMaxEvals) {
        bool improved = false;
        for (const auto& d : kDir) {
            BarycentricCoord cand{bc.tri, std::clamp(bc.r1 + step * d[0], 0.0, 1.0),
                                  std::clamp(bc.r2 + step * d[1], 0.0, 1.0)};
            if (cand.r1 == bc.r1 && cand.r2 == bc.r2) continue;
            const Point2 cp = barycentric_to_cartesian(cand, tri);
            const double fc = obj.eval(cp, f);
            ++evals;
            if (fc < f) {
                bc = cand;
                p = cp;
                f = fc;
                improved = true;
                break;
            }
        }
        if (!improved) step *= 0.5;
    }
    return Descent{p, f};
}

class OptimizeTimer {
public:
    OptimizeTimer(const PlannerContext& ctx)
        : ctx_(ctx),
          t0_(std::chrono::steady_clock::now()),
          paths0_(ctx.oracle->paths_ms()) {}
    ~OptimizeTimer() {
        if (!ctx_.stats) return;
        const auto t1 = std::chrono::steady_clock::now();
        const double wall = std::chrono::duration<double, std::milli>(t1 - t0_).count();
        ctx_.stats->optimize_ms += wall - (ctx_.oracle->paths_ms() - paths0_);
    }

private:
    const PlannerContext& ctx_;
    std::chrono::steady_clock::time_point t0_;
    double paths0_;
};

}  // namespace

SteinerCandidate optimize_steiner_point(std::span<const Point2> attached, const Polygon& region,
                                        const PlannerContext& ctx,
                                        std::span<const Point2> warm_starts) {
    if (attached.size() < 2)
        throw ValidationError("optimize_steiner_point: need at least two attached points");
    if (region.vertices.empty())
        throw ValidationError("optimize_steiner_point: empty region");
    OptimizeTimer timer(ctx);

    const double eps = ctx.map->eps();
    const Polygon reg = region.degenerate() ? inflate_degenerate_hull(region, eps) : region;
    const Point2 reg_center = reg.centroid();

    std::vector<std::pair<double, int>> candidates;
    for (const Triangle& t : ctx.tri->triangles)
        if (convex_overlap(reg, triangle_polygon(t), eps))
            candidates.push_back({distance(t.centroid(), reg_center), t.index});
    if (candidates.empty())
        throw NoCandidateError("optimize_steiner_point: region does not touch the free space");
    std::sort(candidates.begin(), candidates.end());
    if (static_cast<int>(candidates.size()) > ctx.params.candidate_triangle_cap)
        candidates.resize(static_cast<std::size_t>(ctx.params.candidate_triangle_cap));

    const Objective obj{attached, ctx.oracle};
    SteinerCandidate best;
    best.cost = kInf;
    auto consider = [&](const Descent& d) {
        if (d.cost < best.cost) best = SteinerCandidate{d.point, d.cost};
    };

    // Warm starts first: a good incumbent lets the lower bound prune most of
    // the remaining triangles.
    for (const Point2& w : warm_starts) {
        const auto bc = cartesian_to_barycentric(w, *ctx.tri, eps);
        if (!bc) continue;
        consider(pattern_search(bc->tri, bc->r1, bc->r2, obj, *ctx.tri));
    }

    for (const auto& [dist_to_center, index] : candidates) {
        (void)dist_to_center;
        const Triangle& t = ctx.tri->triangles[static_cast<std::size_t>(index)];
        double lb = 0.0;
        for (const Point2& a : attached) lb += distance_point_triangle(a, t);
        if (lb >= best.cost) continue;
        consider(pattern_search(index, kCentroidR1, kCentroidR2, obj, *ctx.tri));
    }
    return best;
}

namespace {

// Incremental tree under construction; nodes for all module terminals are
// created upfront so node index == terminal index during bundling.
struct TreeBuilder {
    const PlannerContext& ctx;
    SteinerTree tree;
    std::vector<std::vector<int>> incident;  // node -> edge ids
    std::vector<char> edge_alive;
    std::vector<char> node_alive;

    explicit TreeBuilder(const Module& m, const PlannerContext& context) : ctx(context) {
        tree.nodes.reserve(m.terminals.size());
        for (std::size_t i = 0; i < m.terminals.size(); ++i) {
            const bool is_root = static_cast<int>(i) == m.root_index;
            tree.nodes.push_back({m.terminals[i], is_root ? NodeKind::root : NodeKind::terminal,
                                  m.terminal_ids[i]});
        }
        tree.root_node = m.root_index;
        incident.assign(tree.nodes.size(), {});
        node_alive.assign(tree.nodes.size(), 1);
    }

    const Point2& pt(int node) const { return tree.nodes[static_cast<std::size_t>(node)].point; }

    int add_steiner(const Point2& p) {
        tree.nodes.push_back({p, NodeKind::steiner, -1});
        incident.push_back({});
        node_alive.push_back(1);
        return static_cast<int>(tree.nodes.size()) - 1;
    }

    void add_edge(int a, int b) {
        SteinerTree::Edge e;
        e.a = a;
        e.b = b;
        e.polyline = ctx.oracle->path_between(pt(a), pt(b));
        const int id = static_cast<int>(tree.edges.size());
        tree.edges.push_back(std::move(e));
        edge_alive.push_back(1);
        incident[static_cast<std::size_t>(a)].push_back(id);
        incident[static_cast<std::size_t>(b)].push_back(id);
    }

    void drop_edge(int id) {
        edge_alive[static_cast<std::size_t>(id)] = 0;
        for (int n : {tree.edges[static_cast<std::size_t>(id)].a,
                      tree.edges[static_cast<std::size_t>(id)].b}) {
            auto& inc = incident[static_cast<std::size_t>(n)];
            inc.erase(std::remove(inc.begin(), inc.end(), id), inc.end());
        }
    }

    int degree(int node) const { return static_cast<int>(incident[static_cast<std::size_t>(node)].size()); }

    std::vector<int> neighbors(int node) const {
        std::vector<int> out;
        for (int eid : incident[static_cast<std::size_t>(node)]) {
            const auto& e = tree.edges[static_cast<std::size_t>(eid)];
            out.push_back(e.a == node ? e.b : e.a);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    void move_steiner(int node, const Point2& p) {
        tree.nodes[static_cast<std::size_t>(node)].point = p;
        // Incident polylines must follow the junction.
        const std::vector<int> eids = incident[static_cast<std::size_t>(node)];
        for (int eid : eids) {
            auto& e = tree.edges[static_cast<std::size_t>(eid)];
            e.polyline = ctx.oracle->path_between(pt(e.a), pt(e.b));
        }
    }

    double incident_length(int node) const {
        double sum = 0.0;
        for (int eid : incident[static_cast<std::size_t>(node)])
            sum += tree.edges[static_cast<std::size_t>(eid)].polyline.length;
        return sum;
    }

    double total_length() const {
        double sum = 0.0;
        for (std::size_t i = 0; i < tree.edges.size(); ++i)
            if (edge_alive[i]) sum += tree.edges[i].polyline.length;
        return sum;
    }

    // Degree-2 Steiner junctions never shorten a tree; replace them with a
    // single geodesic between their neighbors. Degree-0/1 leftovers vanish.
    void splice_low_degree() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
                if (!node_alive[v] || tree.nodes[v].kind != NodeKind::steiner) continue;
                const int deg = degree(static_cast<int>(v));
                if (deg >= 3) continue;
                changed = true;
                if (deg == 2) {
                    const auto inc = incident[v];
                    const auto& e0 = tree.edges[static_cast<std::size_t>(inc[0])];
                    const auto& e1 = tree.edges[static_cast<std::size_t>(inc[1])];
                    const int n0 = e0.a == static_cast<int>(v) ? e0.b : e0.a;
                    const int n1 = e1.a == static_cast<int>(v) ? e1.b : e1.a;
                    drop_edge(inc[0]);
                    drop_edge(inc[1]);
                    add_edge(n0, n1);
                } else if (deg == 1) {
                    drop_edge(incident[v][0]);
                }
                node_alive[v] = 0;
                break;
            }
        }
    }

    SteinerTree finish() {
        splice_low_degree();
        SteinerTree out;
        std::vector<int> remap(tree.nodes.size(), -1);
        for (std::size_t v = 0; v < tree.nodes.size(); ++v) {
            if (!node_alive[v]) continue;
            remap[v] = static_cast<int>(out.nodes.size());
            out.nodes.push_back(tree.nodes[v]);
        }
        out.root_node = remap[static_cast<std::size_t>(tree.root_node)];
        for (std::size_t i = 0; i < tree.edges.size(); ++i) {
            if (!edge_alive[i]) continue;
            SteinerTree::Edge e = tree.edges[i];
            e.a = remap[static_cast<std::size_t>(e.a)];
            e.b = remap[static_cast<std::size_t>(e.b)];
            out.edges.push_back(std::move(e));
        }
        out.total_length = 0.0;
        for (const auto& e : out.edges) out.total_length += e.polyline.length;
        return out;
    }
};

}  // namespace

SteinerTree build_tree(const Module& m, const PlannerContext& ctx,
                       std::span<const Point2> warm_starts) {
    if (m.terminals.empty()) throw ValidationError("build_tree: empty module");
    if (m.root_index < 0 || m.root_index >= static_cast<int>(m.terminals.size()))
        throw ValidationError("build_tree: root index out of range");

    TreeBuilder builder(m, ctx);
    const int root = m.root_index;

    const std::vector<GeodesicPath> paths = build_path_set(m, *ctx.oracle);
    if (paths.empty()) return builder.finish();  // singleton module

    // Terminal node id behind each path (module order minus the root).
    std::vector<int> path_node;
    for (std::size_t i = 0; i < m.terminals.size(); ++i)
        if (static_cast<int>(i) != root) path_node.push_back(static_cast<int>(i));

    const int k = static_cast<int>(paths.size());
    const PathMetricParams metric{ctx.params.np};
    const Dendrogram zi = agglomerate(
        k,
        [&](int i, int j) {
            if (i == j) return 0.0;
            return path_distance(paths[static_cast<std::size_t>(i)],
                                 paths[static_cast<std::size_t>(j)], m.root(), metric);
        },
        ctx.path_linkage);

    const double eps = ctx.map->eps();
    const Point2 root_pt = m.root();
    const double tol = ctx.params.improvement_tol;

    // Branch state per dendrogram node: the junction this branch still has
    // to connect toward the root, and the paths below it (for the hull).
    std::vector<int> endpoint(static_cast<std::size_t>(k) + zi.merges.size(), -1);
    std::vector<std::vector<int>> bundle(static_cast<std::size_t>(k) + zi.merges.size());
    for (int i = 0; i < k; ++i) {
        endpoint[static_cast<std::size_t>(i)] = path_node[static_cast<std::size_t>(i)];
        bundle[static_cast<std::size_t>(i)] = {i};
    }

    for (std::size_t mi = 0; mi < zi.merges.size(); ++mi) {
        const auto& mg = zi.merges[mi];
        const int node = k + static_cast<int>(mi);
        auto& paths_below = bundle[static_cast<std::size_t>(node)];
        paths_below = bundle[static_cast<std::size_t>(mg.left)];
        paths_below.insert(paths_below.end(), bundle[static_cast<std::size_t>(mg.right)].begin(),
                           bundle[static_cast<std::size_t>(mg.right)].end());

        const int ep_l = endpoint[static_cast<std::size_t>(mg.left)];
        const int ep_r = endpoint[static_cast<std::size_t>(mg.right)];

        if (ep_l == root || ep_r == root) {
            // One side already reaches the root; settle the other directly.
            for (int ep : {ep_l, ep_r})
                if (ep != root) builder.add_edge(ep, root);
            endpoint[static_cast<std::size_t>(node)] = root;
            continue;
        }

        std::vector<Point2> hull_points;
        for (int pi : paths_below)
            for (const Point2& w : paths[static_cast<std::size_t>(pi)].waypoints)
                hull_points.push_back(w);
        const Polygon region = convex_hull(hull_points);
        const Polygon filter_region =
            region.degenerate() ? inflate_degenerate_hull(region, eps) : region;

        std::vector<Point2> warm;
        for (const Point2& w : warm_starts)
            if (point_in_convex(w, filter_region, eps)) warm.push_back(w);

        const Point2 attached[3] = {root_pt, builder.pt(ep_l), builder.pt(ep_r)};
        const SteinerCandidate cand =
            optimize_steiner_point(std::span<const Point2>(attached, 3), region, ctx, warm);

        const double direct = ctx.oracle->length_between(builder.pt(ep_l), root_pt) +
                              ctx.oracle->length_between(builder.pt(ep_r), root_pt);
        const bool accept = cand.cost < direct * (1.0 - tol);

        if (!accept || distance(cand.point, root_pt) <= eps) {
            builder.add_edge(ep_l, root);
            builder.add_edge(ep_r, root);
            endpoint[static_cast<std::size_t>(node)] = root;
        } else if (distance(cand.point, builder.pt(ep_l)) <= eps) {
            builder.add_edge(ep_r, ep_l);
            endpoint[static_cast<std::size_t>(node)] = ep_l;
        } else if (distance(cand.point, builder.pt(ep_r)) <= eps) {
            builder.add_edge(ep_l, ep_r);
            endpoint[static_cast<std::size_t>(node)] = ep_r;
        } else {
            const int sp = builder.add_steiner(cand.point);
            builder.add_edge(ep_l, sp);
            builder.add_edge(ep_r, sp);
            endpoint[static_cast<std::size_t>(node)] = sp;
        }
    }

    const int final_node = k == 1 ? 0 : k + static_cast<int>(zi.merges.size()) - 1;
    if (endpoint[static_cast<std::size_t>(final_node)] != root)
        builder.add_edge(endpoint[static_cast<std::size_t>(final_node)], root);

    // Top-down refinement: re-optimize each Steiner point against its
    // current neighbors, sweeping from the root outward.
    for (int sweep = 0; sweep < ctx.params.max_refine_iters; ++sweep) {
        const double before = builder.total_length();

        std::vector<int> order;
        std::vector<char> seen(builder.tree.nodes.size(), 0);
        std::queue<int> frontier;
        frontier.push(root);
        seen[static_cast<std::size_t>(root)] = 1;
        while (!frontier.empty()) {
            const int v = frontier.front();
            frontier.pop();
            if (builder.tree.nodes[static_cast<std::size_t>(v)].kind == NodeKind::steiner)
                order.push_back(v);
            for (int nb : builder.neighbors(v)) {
                if (seen[static_cast<std::size_t>(nb)]) continue;
                seen[static_cast<std::size_t>(nb)] = 1;
                frontier.push(nb);
            }
        }

        for (int sp : order) {
            const std::vector<int> nbs = builder.neighbors(sp);
            if (nbs.size() < 2) continue;
            std::vector<Point2> attached;
            for (int nb : nbs) attached.push_back(builder.pt(nb));
            std::vector<Point2> hull_pts = attached;
            hull_pts.push_back(builder.pt(sp));
            const Polygon region = convex_hull(hull_pts);
            const Point2 warm[1] = {builder.pt(sp)};
            const SteinerCandidate cand = optimize_steiner_point(
                attached, region, ctx, std::span<const Point2>(warm, 1));
            if (cand.cost < builder.incident_length(sp) &&
                distance(cand.point, builder.pt(sp)) > eps)
                builder.move_steiner(sp, cand.point);
        }

        const double after = builder.total_length();
        if (before <= 0.0 || (before - after) / before < ctx.params.improvement_tol) break;
    }

    return builder.finish();
}

void validate_tree(const SteinerTree& tree, const Module& m, const MapEnv& map) {
    const std::size_t n = tree.nodes.size();
    if (n == 0) throw ValidationError("tree: no nodes");
    if (tree.edges.size() != n - 1)
        throw ValidationError("tree: edge count " + std::to_string(tree.edges.size()) +
                              " != nodes-1 = " + std::to_string(n - 1));

    std::vector<int> degree(n, 0);
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : tree.edges) {
        if (e.a < 0 || e.b < 0 || e.a >= static_cast<int>(n) || e.b >= static_cast<int>(n) || e.a == e.b)
            throw ValidationError("tree: bad edge endpoints");
        ++degree[static_cast<std::size_t>(e.a)];
        ++degree[static_cast<std::size_t>(e.b)];
        adj[static_cast<std::size_t>(e.a)].push_back(e.b);
        adj[static_cast<std::size_t>(e.b)].push_back(e.a);
        if (e.polyline.waypoints.size() < 2)
            throw ValidationError("tree: edge polyline has fewer than 2 waypoints");
        if (e.polyline.waypoints.front() != tree.nodes[static_cast<std::size_t>(e.a)].point ||
            e.polyline.waypoints.back() != tree.nodes[static_cast<std::size_t>(e.b)].point)
            throw ValidationError("tree: polyline endpoints do not match edge nodes");
        double len = 0.0;
        for (std::size_t i = 1; i < e.polyline.waypoints.size(); ++i) {
            if (segment_blocked(e.polyline.waypoints[i - 1], e.polyline.waypoints[i], map))
                throw ValidationError("tree: edge polyline crosses an obstacle");
            len += distance(e.polyline.waypoints[i - 1], e.polyline.waypoints[i]);
        }
        if (std::abs(len - e.polyline.length) > 1e-6 * (1.0 + len))
            throw ValidationError("tree: polyline length field inconsistent");
    }

    std::vector<char> seen(n, 0);
    std::queue<int> frontier;
    frontier.push(tree.root_node);
    seen[static_cast<std::size_t>(tree.root_node)] = 1;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const int v = frontier.front();
        frontier.pop();
        for (int nb : adj[static_cast<std::size_t>(v)])
            if (!seen[static_cast<std::size_t>(nb)]) {
                seen[static_cast<std::size_t>(nb)] = 1;
                ++reached;
                frontier.push(nb);
            }
    }
    if (reached != n) throw ValidationError("tree: not connected");

    std::vector<int> found_ids;
    double total = 0.0;
    for (const auto& e : tree.edges) total += e.polyline.length;
    if (std::abs(total - tree.total_length) > 1e-6 * (1.0 + total))
        throw ValidationError("tree: total_length inconsistent with edges");
    for (std::size_t v = 0; v < n; ++v) {
        const auto& node = tree.nodes[v];
        if (node.kind == NodeKind::steiner) {
            if (degree[v] < 3)
                throw ValidationError("tree: Steiner node of degree " + std::to_string(degree[v]));
        } else {
            found_ids.push_back(node.terminal_id);
        }
    }
    std::vector<int> expected = m.terminal_ids;
    std::sort(expected.begin(), expected.end());
    std::sort(found_ids.begin(), found_ids.end());
    if (expected != found_ids)
        throw ValidationError("tree: terminal set does not match the module");
    if (tree.nodes[static_cast<std::size_t>(tree.root_node)].kind != NodeKind::root)
        throw ValidationError("tree: root node is not marked as root");
}

}  // namespace sforest
