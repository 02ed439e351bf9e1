#pragma once

#include <functional>
#include <vector>

#include "sforest/geometry.hpp"
#include "sforest/visibility.hpp"

namespace sforest {

// Binary agglomeration tree. Node ids: leaves are 0..n-1, the k-th merge
// creates node n+k. Heights are non-decreasing in merge order.
struct Dendrogram {
    struct Merge {
        int left = 0;
        int right = 0;
        double height = 0.0;
    };
    int leaf_count = 0;
    std::vector<Merge> merges;
};

enum class Linkage { complete, single };

// Standard agglomerative clustering over a symmetric pairwise distance.
// Ties are broken by the smallest (i, j) cluster-id pair so merge order is
// reproducible. Throws ValidationError when the distance is asymmetric,
// negative, or nonzero on the diagonal.
Dendrogram agglomerate(int n, const std::function<double(int, int)>& dist, Linkage linkage);

// Partition of the leaves into whole subtrees. Module ids are 0-based and
// ordered by each module's smallest leaf id.
struct ClusterCut {
    std::vector<int> assignment;  // leaf id -> module id
    int module_count = 0;
};

// Cuts at the smallest height threshold yielding <= s modules; ties in merge
// heights may drop the count below s.
ClusterCut cut_to_modules(const Dendrogram& z, int s);

// Collapses everything at or below the cut, leaving a dendrogram whose
// leaves are the cut's modules and whose merges are the remaining ones (same
// order and heights). Drives the tree-concatenation schedule.
Dendrogram condense_above_cut(const Dendrogram& z, const ClusterCut& cut);

struct PathMetricParams {
    int np = 20;  // interpolation points for the piecewise gap term
};

// Similarity between two shortest paths that share a root: the summed
// squared gaps between NP arclength-resampled points, scaled by the angle
// between the root-to-terminal directions. Zero for identical paths, and
// also zero for collinear same-direction paths of different lengths (angle
// zero), so this is a similarity rather than a true metric.
double path_distance(const GeodesicPath& u, const GeodesicPath& v, const Point2& root,
                     const PathMetricParams& params);

}  // namespace sforest
