#include "sforest/triangulation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "sforest/errors.hpp"

namespace sforest {

bool point_in_triangle(const Point2& p, const Triangle& t, double eps) {
    const double c1 = cross(t.b - t.a, p - t.a);
    const double c2 = cross(t.c - t.b, p - t.b);
    const double c3 = cross(t.a - t.c, p - t.c);
    const double s1 = eps * norm(t.b - t.a);
    const double s2 = eps * norm(t.c - t.b);
    const double s3 = eps * norm(t.a - t.c);
    return c1 >= -s1 && c2 >= -s2 && c3 >= -s3;
}

double distance_point_triangle(const Point2& p, const Triangle& t) {
    if (point_in_triangle(p, t, 0.0)) return 0.0;
    return std::min({distance_point_segment(p, t.a, t.b),
                     distance_point_segment(p, t.b, t.c),
                     distance_point_segment(p, t.c, t.a)});
}

Point2 barycentric_to_cartesian(const BarycentricCoord& r, const FreeSpaceTriangulation& tri) {
    if (r.tri < 0 || r.tri >= static_cast<int>(tri.triangles.size()))
        throw ValidationError("barycentric_to_cartesian: triangle index out of range");
    if (r.r1 < -1e-12 || r.r1 > 1.0 + 1e-12 || r.r2 < -1e-12 || r.r2 > 1.0 + 1e-12)
        throw ValidationError("barycentric_to_cartesian: r1/r2 outside [0,1]");
    const double r1 = std::clamp(r.r1, 0.0, 1.0);
    const double r2 = std::clamp(r.r2, 0.0, 1.0);
    const Triangle& t = tri.triangles[r.tri];
    const double sq = std::sqrt(r1);
    return t.a * (1.0 - sq) + t.b * (sq * (1.0 - r2)) + t.c * (sq * r2);
}

std::optional<BarycentricCoord> cartesian_to_barycentric(const Point2& p,
                                                         const FreeSpaceTriangulation& tri,
                                                         double eps) {
    for (const Triangle& t : tri.triangles) {
        if (!point_in_triangle(p, t, eps)) continue;
        const double denom = cross(t.b - t.a, t.c - t.a);
        if (std::abs(denom) < 1e-300) continue;
        double beta = cross(p - t.a, t.c - t.a) / denom;
        double gamma = cross(t.b - t.a, p - t.a) / denom;
        beta = std::max(beta, 0.0);
        gamma = std::max(gamma, 0.0);
        const double sq = std::min(beta + gamma, 1.0);
        BarycentricCoord bc;
        bc.tri = t.index;
        bc.r1 = sq * sq;
        bc.r2 = (sq > 1e-300) ? std::clamp(gamma / sq, 0.0, 1.0) : 0.0;
        return bc;
    }
    return std::nullopt;
}

namespace {

struct Mesh {
    std::vector<Point2> verts;
    std::vector<std::array<int, 3>> tris;  // CCW

    double orient(int a, int b, int c) const {
        return cross(verts[b] - verts[a], verts[c] - verts[a]);
    }

    // Strict "d inside circumcircle of CCW (a,b,c)" with a scale-relative
    // guard; borderline cocircular cases count as outside.
    bool incircle_strict(int a, int b, int c, int d) const {
        const Point2 pa = verts[a] - verts[d];
        const Point2 pb = verts[b] - verts[d];
        const Point2 pc = verts[c] - verts[d];
        const double la = dot(pa, pa), lb = dot(pb, pb), lc = dot(pc, pc);
        const double det = pa.x * (pb.y * lc - pc.y * lb) -
                           pa.y * (pb.x * lc - pc.x * lb) +
                           la * (pb.x * pc.y - pc.x * pb.y);
        const double m = std::max({std::abs(pa.x), std::abs(pa.y), std::abs(pb.x),
                                   std::abs(pb.y), std::abs(pc.x), std::abs(pc.y)});
        return det > 1e-11 * m * m * m * m;
    }
};

std::map<std::pair<int, int>, std::vector<int>> edge_map(const Mesh& m) {
    std::map<std::pair<int, int>, std::vector<int>> em;
    for (int ti = 0; ti < static_cast<int>(m.tris.size()); ++ti) {
        const auto& t = m.tris[ti];
        for (int k = 0; k < 3; ++k) {
            int u = t[k], v = t[(k + 1) % 3];
            if (u > v) std::swap(u, v);
            em[{u, v}].push_back(ti);
        }
    }
    return em;
}

// Bowyer-Watson insertion of one interior point. Seeds the cavity with the
// triangle(s) containing p, grows it over edge-adjacent triangles whose
// circumcircles strictly contain p, then fans p to the cavity boundary.
void insert_point(Mesh& m, int pid, double eps) {
    const Point2 p = m.verts[pid];
    std::vector<int> seeds;
    for (int ti = 0; ti < static_cast<int>(m.tris.size()); ++ti) {
        const auto& t = m.tris[ti];
        Triangle tr{ti, m.verts[t[0]], m.verts[t[1]], m.verts[t[2]]};
        if (point_in_triangle(p, tr, eps)) seeds.push_back(ti);
    }
    if (seeds.empty()) throw ValidationError("triangulation: insertion point found no containing triangle");

    auto em = edge_map(m);
    std::vector<char> in_cavity(m.tris.size(), 0);
    std::vector<int> stack = seeds;
    for (int s : seeds) in_cavity[s] = 1;
    while (!stack.empty()) {
        const int ti = stack.back();
        stack.pop_back();
        const auto& t = m.tris[ti];
        for (int k = 0; k < 3; ++k) {
            int u = t[k], v = t[(k + 1) % 3];
            if (u > v) std::swap(u, v);
            for (int nb : em[{u, v}]) {
                if (nb == ti || in_cavity[nb]) continue;
                const auto& n = m.tris[nb];
                if (m.incircle_strict(n[0], n[1], n[2], pid)) {
                    in_cavity[nb] = 1;
                    stack.push_back(nb);
                }
            }
        }
    }

    // Directed cavity boundary: edges whose reverse is not in the cavity.
    std::set<std::pair<int, int>> directed;
    for (int ti = 0; ti < static_cast<int>(m.tris.size()); ++ti) {
        if (!in_cavity[ti]) continue;
        const auto& t = m.tris[ti];
        for (int k = 0; k < 3; ++k) directed.insert({t[k], t[(k + 1) % 3]});
    }
    std::vector<std::pair<int, int>> boundary;
    for (const auto& e : directed)
        if (!directed.count({e.second, e.first})) boundary.push_back(e);

    std::vector<std::array<int, 3>> kept;
    for (int ti = 0; ti < static_cast<int>(m.tris.size()); ++ti)
        if (!in_cavity[ti]) kept.push_back(m.tris[ti]);
    for (const auto& [a, b] : boundary) {
        if (m.orient(a, b, pid) <= 0.0)
            throw ValidationError("triangulation: degenerate cavity fan (input in special position)");
        kept.push_back({a, b, pid});
    }
    m.tris = std::move(kept);
}

bool has_edge(const Mesh& m, int u, int v) {
    for (const auto& t : m.tris) {
        int hit = 0;
        for (int k = 0; k < 3; ++k) hit += (t[k] == u || t[k] == v);
        if (hit == 2) {
            for (int k = 0; k < 3; ++k) {
                const int a = t[k], b = t[(k + 1) % 3];
                if ((a == u && b == v) || (a == v && b == u)) return true;
            }
        }
    }
    return false;
}

// Delaunay-ish retriangulation of the pseudo-polygon (a, ws..., b) left
// behind when the triangles crossing a constraint edge are removed.
void retriangulate_chain(Mesh& m, int a, int b, const std::vector<int>& ws,
                         std::vector<std::array<int, 3>>& out) {
    if (ws.empty()) return;
    std::size_t pick = 0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
        bool ok = true;
        for (std::size_t j = 0; j < ws.size() && ok; ++j)
            if (j != i && m.incircle_strict(a, ws[i], b, ws[j])) ok = false;
        if (ok) {
            pick = i;
            break;
        }
    }
    std::array<int, 3> t{a, ws[pick], b};
    if (m.orient(t[0], t[1], t[2]) < 0.0) std::swap(t[1], t[2]);
    if (m.orient(t[0], t[1], t[2]) <= 0.0)
        throw ValidationError("triangulation: collinear pseudo-polygon during constraint insertion");
    out.push_back(t);
    retriangulate_chain(m, a, ws[pick], std::vector<int>(ws.begin(), ws.begin() + pick), out);
    retriangulate_chain(m, ws[pick], b, std::vector<int>(ws.begin() + pick + 1, ws.end()), out);
}

void enforce_edge(Mesh& m, int u, int v, double eps) {
    if (has_edge(m, u, v)) return;
    const Point2 pu = m.verts[u], pv = m.verts[v];

    // Triangles whose interior is crossed by the open segment (u,v).
    std::vector<int> pipe;
    for (int ti = 0; ti < static_cast<int>(m.tris.size()); ++ti) {
        const auto& t = m.tris[ti];
        // Clip segment parameter range against the triangle half-planes.
        double t0 = 0.0, t1 = 1.0;
        bool empty = false;
        for (int k = 0; k < 3 && !empty; ++k) {
            const Point2 a = m.verts[t[k]];
            const Point2 b = m.verts[t[(k + 1) % 3]];
            const Point2 n{a.y - b.y, b.x - a.x};  // inward for CCW
            const double du = dot(n, pu - a);
            const double dv = dot(n, pv - a);
            if (du >= 0 && dv >= 0) continue;
            if (du < 0 && dv < 0) {
                empty = true;
                break;
            }
            const double tx = du / (du - dv);
            if (du < 0)
                t0 = std::max(t0, tx);
            else
                t1 = std::min(t1, tx);
        }
        if (empty || t1 - t0 < 1e-9) continue;
        const Point2 mid = pu + (pv - pu) * (0.5 * (t0 + t1));
        Triangle tr{ti, m.verts[t[0]], m.verts[t[1]], m.verts[t[2]]};
        // Strictly interior midpoint: within the triangle but off its edges.
        if (!point_in_triangle(mid, tr, 0.0)) continue;
        if (distance_point_segment(mid, tr.a, tr.b) <= eps ||
            distance_point_segment(mid, tr.b, tr.c) <= eps ||
            distance_point_segment(mid, tr.c, tr.a) <= eps)
            continue;
        pipe.push_back(ti);
    }
    if (pipe.empty())
        throw ValidationError("triangulation: constraint edge crosses no triangle (vertex on edge?)");

    // Cavity boundary loop.
    std::set<std::pair<int, int>> directed;
    std::vector<char> in_pipe(m.tris.size(), 0);
    for (int ti : pipe) in_pipe[ti] = 1;
    for (int ti : pipe) {
        const auto& t = m.tris[ti];
        for (int k = 0; k < 3; ++k) directed.insert({t[k], t[(k + 1) % 3]});
    }
    std::map<int, int> next_on_boundary;
    for (const auto& e : directed) {
        if (!directed.count({e.second, e.first})) {
            if (next_on_boundary.count(e.first))
                throw ValidationError("triangulation: constraint cavity is not a simple loop");
            next_on_boundary[e.first] = e.second;
        }
    }
    if (!next_on_boundary.count(u) || !next_on_boundary.count(v))
        throw ValidationError("triangulation: constraint endpoints not on cavity boundary");

    auto walk = [&](int from, int to) {
        std::vector<int> chain;
        int cur = next_on_boundary.at(from);
        while (cur != to) {
            chain.push_back(cur);
            auto it = next_on_boundary.find(cur);
            if (it == next_on_boundary.end() || chain.size() > next_on_boundary.size())
                throw ValidationError("triangulation: constraint cavity walk failed");
            cur = it->second;
        }
        return chain;
    };
    const std::vector<int> side1 = walk(u, v);
    const std::vector<int> side2 = walk(v, u);

    std::vector<std::array<int, 3>> kept;
    for (int ti = 0; ti < static_cast<int>(m.tris.size()); ++ti)
        if (!in_pipe[ti]) kept.push_back(m.tris[ti]);
    retriangulate_chain(m, u, v, side1, kept);
    retriangulate_chain(m, v, u, side2, kept);
    m.tris = std::move(kept);
}

// Restores the Delaunay property away from constrained edges.
void lawson_flips(Mesh& m, const std::set<std::pair<int, int>>& constrained) {
    const int cap = 20 * static_cast<int>(m.tris.size()) * static_cast<int>(m.tris.size()) + 100;
    for (int iter = 0; iter < cap; ++iter) {
        auto em = edge_map(m);
        bool flipped = false;
        for (const auto& [edge, owners] : em) {
            if (owners.size() != 2 || constrained.count(edge)) continue;
            const int t1 = owners[0], t2 = owners[1];
            const int u = edge.first, v = edge.second;
            auto apex = [&](int ti) {
                for (int k = 0; k < 3; ++k)
                    if (m.tris[ti][k] != u && m.tris[ti][k] != v) return m.tris[ti][k];
                return -1;
            };
            const int a = apex(t1), b = apex(t2);
            if (a < 0 || b < 0) continue;
            if (!m.incircle_strict(m.tris[t1][0], m.tris[t1][1], m.tris[t1][2], b)) continue;
            std::array<int, 3> n1{u, a, b};
            std::array<int, 3> n2{v, b, a};
            if (m.orient(n1[0], n1[1], n1[2]) < 0.0) std::swap(n1[1], n1[2]);
            if (m.orient(n2[0], n2[1], n2[2]) < 0.0) std::swap(n2[1], n2[2]);
            if (m.orient(n1[0], n1[1], n1[2]) <= 0.0 || m.orient(n2[0], n2[1], n2[2]) <= 0.0)
                continue;  // non-convex quad
            m.tris[t1] = n1;
            m.tris[t2] = n2;
            flipped = true;
            break;
        }
        if (!flipped) return;
    }
}

}  // namespace

FreeSpaceTriangulation triangulate_free_space(const MapEnv& map) {
    MapEnv checked = map;
    validate_map(checked);
    const double eps = checked.eps();
    const double side = checked.side;

    Mesh m;
    m.verts = {{0, 0}, {side, 0}, {side, side}, {0, side}};
    m.tris = {{0, 1, 2}, {0, 2, 3}};

    std::vector<std::pair<int, int>> constraints = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    for (const Polygon& poly : checked.obstacles) {
        const int base = static_cast<int>(m.verts.size());
        const int n = static_cast<int>(poly.vertices.size());
        for (const Point2& v : poly.vertices) m.verts.push_back(v);
        for (int k = 0; k < n; ++k) constraints.push_back({base + k, base + (k + 1) % n});
    }

    for (int pid = 4; pid < static_cast<int>(m.verts.size()); ++pid) insert_point(m, pid, eps);

    std::set<std::pair<int, int>> constrained;
    for (auto [u, v] : constraints) {
        enforce_edge(m, u, v, eps);
        if (u > v) std::swap(u, v);
        constrained.insert({u, v});
    }
    lawson_flips(m, constrained);

    FreeSpaceTriangulation out;
    out.map_id = checked.id;
    for (const auto& t : m.tris) {
        Triangle tr{0, m.verts[t[0]], m.verts[t[1]], m.verts[t[2]]};
        bool in_hole = false;
        const Point2 c = tr.centroid();
        for (const Polygon& poly : checked.obstacles)
            if (point_in_polygon(c, poly, eps)) {
                in_hole = true;
                break;
            }
        if (in_hole) continue;
        tr.index = static_cast<int>(out.triangles.size());
        out.triangles.push_back(tr);
    }

    double covered = 0.0;
    for (const Triangle& t : out.triangles) covered += t.area();
    double expected = side * side;
    for (const Polygon& poly : checked.obstacles) expected -= poly.area();
    if (std::abs(covered - expected) > 1e-6 * side * side)
        throw ValidationError("triangulation: covered area " + std::to_string(covered) +
                              " does not match free-space area " + std::to_string(expected));
    return out;
}

}  // namespace sforest
