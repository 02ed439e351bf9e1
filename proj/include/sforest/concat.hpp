#pragma once

#include <functional>
#include <vector>

#include "sforest/clustering.hpp"
#include "sforest/steiner.hpp"

namespace sforest {

// Cost coefficients: w_l prices total tree length, w_d prices root
// dispersion. Both zero is rejected.
struct Weights {
    double wl = 1.0;
    double wd = 0.0;
};

struct ForestEntry {
    Module module;
    SteinerTree tree;
};

// Current set of module trees; `step` counts performed concatenations.
struct Forest {
    std::vector<ForestEntry> entries;
    int step = 0;
};

struct CostBreakdown {
    double f = 0.0;
    double lt = 0.0;  // sum of tree lengths
    double ld = 0.0;  // sum of pairwise root distances
};

struct CostRecord {
    int step = 0;
    int module_count = 0;
    double lt = 0.0;
    double ld = 0.0;
    double f = 0.0;
};

struct CostTrace {
    std::vector<CostRecord> records;
};

enum class StopKind { argmin, early_stop };

struct StopPolicy {
    StopKind kind = StopKind::argmin;
    int patience = 2;    // early_stop: consecutive flat steps before halting
    double eps = 1e-3;   // early_stop: relative improvement threshold
};

// F = w_l * L_t + w_d * L_d with L_t the summed tree lengths and L_d the
// summed Euclidean distances over unordered root pairs.
CostBreakdown cost(const Forest& forest, const Weights& w);

// Merges two terminal-disjoint trees: unions the modules, re-selects the
// root, and rebuilds via build_tree with the previous Steiner points as
// warm starts (cached geodesics are reused through the shared oracle).
ForestEntry concat_trees(const ForestEntry& a, const ForestEntry& b, int merged_id,
                         const PlannerContext& ctx);

struct ConcatResult {
    Forest best;
    int best_step = 0;
    CostTrace trace;
};

using ForestObserver = std::function<void(const Forest&)>;

// Executes merges in the module dendrogram's order, recording cost after
// every step (step 0 is the initial forest). argmin returns the cheapest
// forest seen; early_stop halts after `patience` consecutive steps whose
// relative improvement falls below eps and returns the best so far.
ConcatResult run_concatenation(const Forest& initial, const Dendrogram& z_modules,
                               const Weights& w, const StopPolicy& policy,
                               const PlannerContext& ctx,
                               const ForestObserver& observer = nullptr);

}  // namespace sforest
