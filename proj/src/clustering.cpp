#include "sforest/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sforest/errors.hpp"

namespace sforest {

Dendrogram agglomerate(int n, const std::function<double(int, int)>& dist, Linkage linkage) {
    if (n < 1) throw ValidationError("agglomerate: need at least one item");
    Dendrogram z;
    z.leaf_count = n;
    if (n == 1) return z;

    const int total = 2 * n - 1;
    const std::size_t stride = static_cast<std::size_t>(total);
    std::vector<double> d(stride * stride, 0.0);
    for (int i = 0; i < n; ++i) {
        const double self = dist(i, i);
        if (std::abs(self) > 1e-9)
            throw ValidationError("agglomerate: dist(" + std::to_string(i) + ", " +
                                  std::to_string(i) + ") is not zero");
        for (int j = i + 1; j < n; ++j) {
            const double dij = dist(i, j);
            const double dji = dist(j, i);
            if (dij < 0.0 || dji < 0.0)
                throw ValidationError("agglomerate: negative distance between items " +
                                      std::to_string(i) + " and " + std::to_string(j));
            if (std::abs(dij - dji) > 1e-9 * std::max(1.0, std::abs(dij)))
                throw ValidationError("agglomerate: asymmetric distance between items " +
                                      std::to_string(i) + " and " + std::to_string(j));
            d[static_cast<std::size_t>(i) * stride + static_cast<std::size_t>(j)] = dij;
            d[static_cast<std::size_t>(j) * stride + static_cast<std::size_t>(i)] = dij;
        }
    }

    std::vector<int> active(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) active[static_cast<std::size_t>(i)] = i;

    for (int step = 0; step < n - 1; ++step) {
        double best = std::numeric_limits<double>::infinity();
        int bi = -1, bj = -1;
        for (std::size_t a = 0; a < active.size(); ++a) {
            for (std::size_t b = a + 1; b < active.size(); ++b) {
                int i = active[a], j = active[b];
                if (i > j) std::swap(i, j);
                const double dij = d[static_cast<std::size_t>(i) * stride + static_cast<std::size_t>(j)];
                if (dij < best || (dij == best && (i < bi || (i == bi && j < bj)))) {
                    best = dij;
                    bi = i;
                    bj = j;
                }
            }
        }
        const int fresh = n + step;
        z.merges.push_back({bi, bj, best});
        for (int k : active) {
            if (k == bi || k == bj) continue;
            const double dki = d[static_cast<std::size_t>(k) * stride + static_cast<std::size_t>(bi)];
            const double dkj = d[static_cast<std::size_t>(k) * stride + static_cast<std::size_t>(bj)];
            const double merged = linkage == Linkage::complete ? std::max(dki, dkj) : std::min(dki, dkj);
            d[static_cast<std::size_t>(k) * stride + static_cast<std::size_t>(fresh)] = merged;
            d[static_cast<std::size_t>(fresh) * stride + static_cast<std::size_t>(k)] = merged;
        }
        active.erase(std::remove_if(active.begin(), active.end(),
                                    [&](int v) { return v == bi || v == bj; }),
                     active.end());
        active.push_back(fresh);
    }
    return z;
}

ClusterCut cut_to_modules(const Dendrogram& z, int s) {
    if (s < 1) throw ValidationError("cut_to_modules: s must be >= 1");
    const int n = z.leaf_count;
    ClusterCut cut;
    cut.assignment.assign(static_cast<std::size_t>(n), -1);

    int applied = 0;
    if (s < n) {
        // Smallest threshold with <= s modules is the height of merge n-s;
        // height ties below it collapse further merges too.
        const double threshold = z.merges[static_cast<std::size_t>(n - s - 1)].height;
        while (applied < static_cast<int>(z.merges.size()) &&
               z.merges[static_cast<std::size_t>(applied)].height <= threshold)
            ++applied;
    }

    // Climb parent links created by the applied prefix.
    std::vector<int> parent(static_cast<std::size_t>(n + applied), -1);
    for (int k = 0; k < applied; ++k) {
        parent[static_cast<std::size_t>(z.merges[static_cast<std::size_t>(k)].left)] = n + k;
        parent[static_cast<std::size_t>(z.merges[static_cast<std::size_t>(k)].right)] = n + k;
    }
    auto top = [&](int v) {
        while (v < static_cast<int>(parent.size()) && parent[static_cast<std::size_t>(v)] >= 0)
            v = parent[static_cast<std::size_t>(v)];
        return v;
    };

    std::vector<int> module_of_top;  // top node id per module, ordered by first leaf
    for (int leaf = 0; leaf < n; ++leaf) {
        const int t = top(leaf);
        int id = -1;
        for (std::size_t m = 0; m < module_of_top.size(); ++m)
            if (module_of_top[m] == t) id = static_cast<int>(m);
        if (id < 0) {
            id = static_cast<int>(module_of_top.size());
            module_of_top.push_back(t);
        }
        cut.assignment[static_cast<std::size_t>(leaf)] = id;
    }
    cut.module_count = static_cast<int>(module_of_top.size());
    return cut;
}

Dendrogram condense_above_cut(const Dendrogram& z, const ClusterCut& cut) {
    const int n = z.leaf_count;
    const int s = cut.module_count;
    const int prefix = n - s;

    // Module of every node at or below the cut.
    std::vector<int> node_module(static_cast<std::size_t>(n + z.merges.size()), -1);
    for (int leaf = 0; leaf < n; ++leaf)
        node_module[static_cast<std::size_t>(leaf)] = cut.assignment[static_cast<std::size_t>(leaf)];
    for (int k = 0; k < prefix; ++k)
        node_module[static_cast<std::size_t>(n + k)] =
            node_module[static_cast<std::size_t>(z.merges[static_cast<std::size_t>(k)].left)];

    Dendrogram out;
    out.leaf_count = s;
    std::vector<int> condensed(static_cast<std::size_t>(n + z.merges.size()), -1);
    for (int k = prefix; k < static_cast<int>(z.merges.size()); ++k) {
        const auto& m = z.merges[static_cast<std::size_t>(k)];
        auto resolve = [&](int node) {
            if (condensed[static_cast<std::size_t>(node)] >= 0)
                return condensed[static_cast<std::size_t>(node)];
            return node_module[static_cast<std::size_t>(node)];
        };
        out.merges.push_back({resolve(m.left), resolve(m.right), m.height});
        condensed[static_cast<std::size_t>(n + k)] = s + (k - prefix);
    }
    return out;
}

double path_distance(const GeodesicPath& u, const GeodesicPath& v, const Point2& root,
                     const PathMetricParams& params) {
    if (u.waypoints.empty() || v.waypoints.empty())
        throw ValidationError("path_distance: empty path");
    const double scale = 1.0 + norm(root);
    if (distance(u.source(), root) > 1e-9 * scale || distance(v.source(), root) > 1e-9 * scale)
        throw ValidationError("path_distance: paths must originate at the root");

    const Point2 a = u.target() - root;
    const Point2 b = v.target() - root;
    const double na = norm(a), nb = norm(b);
    if (na <= 1e-12 * scale || nb <= 1e-12 * scale)
        throw ValidationError("path_distance: terminal coincides with the root");

    const std::vector<Point2> ru = resample_path(u, params.np);
    const std::vector<Point2> rv = resample_path(v, params.np);
    double gap = 0.0;
    for (std::size_t h = 0; h < ru.size(); ++h) {
        const Point2 diff = ru[h] - rv[h];
        gap += dot(diff, diff);
    }
    const double cosang = std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
    return gap * std::acos(cosang);
}

}  // namespace sforest
