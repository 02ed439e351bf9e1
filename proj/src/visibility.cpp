#include "sforest/visibility.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <limits>
#include <queue>
#include <string>
#include <tuple>

#include "sforest/errors.hpp"

namespace sforest {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::pair<std::uint64_t, std::uint64_t> point_key(const Point2& p) {
    std::uint64_t bx, by;
    std::memcpy(&bx, &p.x, sizeof(bx));
    std::memcpy(&by, &p.y, sizeof(by));
    return {bx, by};
}

// True if waypoint sequence a is lexicographically smaller than b.
bool path_lex_less(const std::vector<Point2>& a, const std::vector<Point2>& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (lex_less(a[i], b[i])) return true;
        if (lex_less(b[i], a[i])) return false;
    }
    return a.size() < b.size();
}

class ScopedTimer {
public:
    explicit ScopedTimer(double& sink) : sink_(sink), t0_(std::chrono::steady_clock::now()) {}
    ~ScopedTimer() {
        const auto t1 = std::chrono::steady_clock::now();
        sink_ += std::chrono::duration<double, std::milli>(t1 - t0_).count();
    }

private:
    double& sink_;
    std::chrono::steady_clock::time_point t0_;
};

}  // namespace

VisibilityGraph VisibilityGraph::build(const MapEnv& map, std::span<const Point2> extra) {
    VisibilityGraph g;
    g.map_id_ = map.id != 0 ? map.id : map_content_hash(map);
    g.points_ = {{0, 0}, {map.side, 0}, {map.side, map.side}, {0, map.side}};
    for (const Polygon& poly : map.obstacles)
        g.points_.insert(g.points_.end(), poly.vertices.begin(), poly.vertices.end());
    g.structural_count_ = static_cast<int>(g.points_.size());

    for (std::size_t i = 0; i < g.points_.size(); ++i) g.index_.emplace(point_key(g.points_[i]), i);

    for (const Point2& p : extra) {
        for (std::size_t oi = 0; oi < map.obstacles.size(); ++oi) {
            if (point_in_polygon(p, map.obstacles[oi], map.eps()))
                throw ValidationError("visibility: extra point (" + std::to_string(p.x) + ", " +
                                      std::to_string(p.y) + ") lies inside obstacle " +
                                      std::to_string(oi));
        }
        if (g.index_.emplace(point_key(p), g.points_.size()).second) g.points_.push_back(p);
    }

    const int n = static_cast<int>(g.points_.size());
    g.adjacency_.assign(static_cast<std::size_t>(n), {});
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (segment_blocked(g.points_[i], g.points_[j], map)) continue;
            const double w = distance(g.points_[i], g.points_[j]);
            g.adjacency_[static_cast<std::size_t>(i)].push_back({j, w});
            g.adjacency_[static_cast<std::size_t>(j)].push_back({i, w});
            ++g.edge_count_;
        }
    }
    return g;
}

int VisibilityGraph::find_vertex(const Point2& p) const {
    const auto it = index_.find(point_key(p));
    return it == index_.end() ? -1 : it->second;
}

VisibilityGraph build_visibility_graph(const MapEnv& map, std::span<const Point2> extra) {
    return VisibilityGraph::build(map, extra);
}

std::vector<Point2> resample_path(const GeodesicPath& path, int np) {
    if (np < 2) throw ValidationError("resample_path: NP must be >= 2");
    if (path.waypoints.empty()) throw ValidationError("resample_path: empty path");

    std::vector<double> cum(path.waypoints.size(), 0.0);
    for (std::size_t i = 1; i < path.waypoints.size(); ++i)
        cum[i] = cum[i - 1] + distance(path.waypoints[i - 1], path.waypoints[i]);
    const double total = cum.back();

    std::vector<Point2> out(static_cast<std::size_t>(np));
    if (total <= 0.0) {
        std::fill(out.begin(), out.end(), path.waypoints.front());
        return out;
    }
    std::size_t seg = 0;
    for (int k = 0; k < np; ++k) {
        const double s = total * static_cast<double>(k) / static_cast<double>(np - 1);
        while (seg + 2 < path.waypoints.size() && cum[seg + 1] < s) ++seg;
        const double seg_len = cum[seg + 1] - cum[seg];
        const double t = seg_len > 0.0 ? std::clamp((s - cum[seg]) / seg_len, 0.0, 1.0) : 0.0;
        out[static_cast<std::size_t>(k)] =
            path.waypoints[seg] + (path.waypoints[seg + 1] - path.waypoints[seg]) * t;
    }
    out.front() = path.waypoints.front();
    out.back() = path.waypoints.back();
    return out;
}

GeodesicOracle::GeodesicOracle(const MapEnv& map, std::span<const Point2> extra)
    : map_(map), graph_(VisibilityGraph::build(map, extra)) {
    ScopedTimer timer(paths_ms_);
    s_ = graph_.structural_count();
    const std::size_t sz = static_cast<std::size_t>(s_);
    table_.assign(sz * sz, kInf);
    next_hop_.assign(sz * sz, -1);
    for (int i = 0; i < s_; ++i) {
        table_[static_cast<std::size_t>(i) * sz + static_cast<std::size_t>(i)] = 0.0;
        next_hop_[static_cast<std::size_t>(i) * sz + static_cast<std::size_t>(i)] = i;
        for (const auto& [j, w] : graph_.neighbors(i)) {
            if (j >= s_) continue;
            table_[static_cast<std::size_t>(i) * sz + static_cast<std::size_t>(j)] = w;
            next_hop_[static_cast<std::size_t>(i) * sz + static_cast<std::size_t>(j)] = j;
        }
    }
    for (int k = 0; k < s_; ++k)
        for (int i = 0; i < s_; ++i) {
            const double dik = table_[static_cast<std::size_t>(i) * sz + static_cast<std::size_t>(k)];
            if (dik == kInf) continue;
            for (int j = 0; j < s_; ++j) {
                const double cand = dik + table_[static_cast<std::size_t>(k) * sz + static_cast<std::size_t>(j)];
                auto& cur = table_[static_cast<std::size_t>(i) * sz + static_cast<std::size_t>(j)];
                if (cand < cur) {
                    cur = cand;
                    next_hop_[static_cast<std::size_t>(i) * sz + static_cast<std::size_t>(j)] =
                        next_hop_[static_cast<std::size_t>(i) * sz + static_cast<std::size_t>(k)];
                }
            }
        }
}

bool GeodesicOracle::visible(const Point2& a, const Point2& b) const {
    return !segment_blocked(a, b, map_);
}

std::vector<int> GeodesicOracle::structural_chain(int from, int to) const {
    std::vector<int> chain{from};
    int cur = from;
    while (cur != to) {
        cur = next_hop_[static_cast<std::size_t>(cur) * static_cast<std::size_t>(s_) +
                        static_cast<std::size_t>(to)];
        if (cur < 0) throw NoPathError("geodesic: structural vertices disconnected");
        chain.push_back(cur);
        if (chain.size() > static_cast<std::size_t>(s_) + 1)
            throw NoPathError("geodesic: successor chain does not terminate");
    }
    return chain;
}

GeodesicPath GeodesicOracle::astar(int src, int dst) const {
    const int n = graph_.vertex_count();
    const Point2 goal = graph_.point_of(dst);
    std::vector<double> g(static_cast<std::size_t>(n), kInf);
    std::vector<char> settled(static_cast<std::size_t>(n), 0);

    auto h = [&](int v) { return distance(graph_.point_of(v), goal); };
    using Entry = std::tuple<double, double, int>;  // f, g, vertex
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
    g[static_cast<std::size_t>(src)] = 0.0;
    open.push({h(src), 0.0, src});
    double best = kInf;

    while (!open.empty()) {
        const auto [f, gu, u] = open.top();
        open.pop();
        if (settled[static_cast<std::size_t>(u)] || gu > g[static_cast<std::size_t>(u)]) continue;
        if (best < kInf && f > best + 1e-12 * (1.0 + best)) break;
        settled[static_cast<std::size_t>(u)] = 1;
        if (u == dst) {
            best = gu;
            continue;
        }
        // Interior waypoints must be structural vertices: registered points
        // other than the endpoints never relay a path.
        if (u != src && !graph_.is_structural(u)) continue;
        for (const auto& [v, w] : graph_.neighbors(u)) {
            if (v != dst && !graph_.is_structural(v)) continue;
            if (settled[static_cast<std::size_t>(v)]) continue;
            const double cand = gu + w;
            if (cand < g[static_cast<std::size_t>(v)]) {
                g[static_cast<std::size_t>(v)] = cand;
                open.push({cand + h(v), cand, v});
            }
        }
    }
    if (best == kInf)
        throw NoPathError("shortest_path: no route between the requested vertices");

    // Among equal-length shortest paths pick the lexicographically smallest
    // waypoint sequence: dynamic program over the tie DAG in g order.
    std::vector<int> order;
    for (int v = 0; v < n; ++v)
        if (settled[static_cast<std::size_t>(v)]) order.push_back(v);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double ga = g[static_cast<std::size_t>(a)], gb = g[static_cast<std::size_t>(b)];
        if (ga != gb) return ga < gb;
        if (graph_.point_of(a) != graph_.point_of(b))
            return lex_less(graph_.point_of(a), graph_.point_of(b));
        return a < b;
    });
    std::vector<std::vector<Point2>> best_seq(static_cast<std::size_t>(n));
    best_seq[static_cast<std::size_t>(src)] = {graph_.point_of(src)};
    for (int v : order) {
        if (v == src) continue;
        const double gv = g[static_cast<std::size_t>(v)];
        std::vector<Point2> chosen;
        for (const auto& [u, w] : graph_.neighbors(v)) {
            if (!settled[static_cast<std::size_t>(u)]) continue;
            if (u != src && !graph_.is_structural(u)) continue;
            if (best_seq[static_cast<std::size_t>(u)].empty()) continue;
            if (std::abs(g[static_cast<std::size_t>(u)] + w - gv) > 1e-12 * (1.0 + gv)) continue;
            std::vector<Point2> cand = best_seq[static_cast<std::size_t>(u)];
            cand.push_back(graph_.point_of(v));
            if (chosen.empty() || path_lex_less(cand, chosen)) chosen = std::move(cand);
        }
        best_seq[static_cast<std::size_t>(v)] = std::move(chosen);
    }

    GeodesicPath out;
    out.waypoints = best_seq[static_cast<std::size_t>(dst)];
    if (out.waypoints.empty())
        throw NoPathError("shortest_path: tie reconstruction failed");
    out.length = 0.0;
    for (std::size_t i = 1; i < out.waypoints.size(); ++i)
        out.length += distance(out.waypoints[i - 1], out.waypoints[i]);
    return out;
}

GeodesicPath GeodesicOracle::shortest_path(int src, int dst) const {
    if (src < 0 || dst < 0 || src >= graph_.vertex_count() || dst >= graph_.vertex_count())
        throw ValidationError("shortest_path: vertex id out of range");
    if (src == dst) return GeodesicPath{{graph_.point_of(src)}, 0.0};

    const std::pair<int, int> key{std::min(src, dst), std::max(src, dst)};
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = path_cache_.find(key);
    if (it == path_cache_.end()) {
        ScopedTimer timer(paths_ms_);
        it = path_cache_.emplace(key, astar(key.first, key.second)).first;
    }
    GeodesicPath path = it->second;
    if (src != key.first) std::reverse(path.waypoints.begin(), path.waypoints.end());
    return path;
}

GeodesicPath GeodesicOracle::shortest_path(const Point2& src, const Point2& dst) const {
    const int a = graph_.find_vertex(src);
    const int b = graph_.find_vertex(dst);
    if (a < 0 || b < 0) throw ValidationError("shortest_path: endpoint is not a graph vertex");
    return shortest_path(a, b);
}

const GeodesicOracle::Field& GeodesicOracle::field_of(const Point2& p) const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    const auto key = point_key(p);
    auto it = field_cache_.find(key);
    if (it != field_cache_.end()) return *it->second;

    ScopedTimer timer(paths_ms_);
    auto field = std::make_unique<Field>();
    const std::size_t sz = static_cast<std::size_t>(s_);
    field->dist.assign(sz, kInf);
    field->via.assign(sz, -1);

    std::vector<double> direct(sz, kInf);
    for (int w = 0; w < s_; ++w)
        if (visible(p, graph_.point_of(w)))
            direct[static_cast<std::size_t>(w)] = distance(p, graph_.point_of(w));

    for (int w = 0; w < s_; ++w) {
        double best = kInf;
        int via = -1;
        for (int u = 0; u < s_; ++u) {
            if (direct[static_cast<std::size_t>(u)] == kInf) continue;
            const double t = table_[static_cast<std::size_t>(w) * sz + static_cast<std::size_t>(u)];
            if (t == kInf) continue;
            const double cand = t + direct[static_cast<std::size_t>(u)];
            if (cand < best) {
                best = cand;
                via = u;
            }
        }
        field->dist[static_cast<std::size_t>(w)] = best;
        field->via[static_cast<std::size_t>(w)] = via;
    }
    const Field& ref = *field;
    field_cache_.emplace(key, std::move(field));
    return ref;
}

double GeodesicOracle::length_between(const Point2& a, const Point2& b) const {
    if (a == b) return 0.0;
    if (visible(a, b)) return distance(a, b);
    const Field& fb = field_of(b);
    double best = kInf;
    for (int w = 0; w < s_; ++w) {
        const double fd = fb.dist[static_cast<std::size_t>(w)];
        if (fd == kInf) continue;
        const Point2& pw = graph_.point_of(w);
        const double base = distance(a, pw);
        if (base + fd >= best) continue;  // cannot improve; skip the segment test
        if (visible(a, pw)) best = base + fd;
    }
    if (best == kInf) throw NoPathError("geodesic: points are mutually unreachable");
    return best;
}

GeodesicPath GeodesicOracle::path_between(const Point2& a, const Point2& b) const {
    if (a == b) return GeodesicPath{{a}, 0.0};
    if (visible(a, b)) return GeodesicPath{{a, b}, distance(a, b)};
    const Field& fb = field_of(b);
    double best = kInf;
    int w1 = -1;
    for (int w = 0; w < s_; ++w) {
        const double fd = fb.dist[static_cast<std::size_t>(w)];
        if (fd == kInf) continue;
        const Point2& pw = graph_.point_of(w);
        const double base = distance(a, pw);
        if (base + fd >= best) continue;
        if (visible(a, pw)) {
            best = base + fd;
            w1 = w;
        }
    }
    if (w1 < 0) throw NoPathError("geodesic: points are mutually unreachable");

    GeodesicPath out;
    out.waypoints.push_back(a);
    for (int v : structural_chain(w1, fb.via[static_cast<std::size_t>(w1)]))
        out.waypoints.push_back(graph_.point_of(v));
    out.waypoints.push_back(b);
    out.length = 0.0;
    for (std::size_t i = 1; i < out.waypoints.size(); ++i)
        out.length += distance(out.waypoints[i - 1], out.waypoints[i]);
    return out;
}

}  // namespace sforest
