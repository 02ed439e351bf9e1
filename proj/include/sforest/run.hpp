#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sforest/concat.hpp"
#include "sforest/mapgen.hpp"

namespace sforest {

// A map plus the terminals to connect.
struct Scenario {
    MapEnv map;
    std::vector<Point2> terminals;
};

// Validates the map and checks every terminal lies in free space with no
// duplicates. Throws ValidationError.
void validate_scenario(Scenario& sc);

struct SolveSettings {
    std::optional<double> theta;  // module fraction; s = max(1, round(theta*n))
    std::optional<int> modules;   // explicit initial module count
    Weights weights;
    int np = 20;
    StopPolicy policy;
    Linkage terminal_linkage = Linkage::complete;
    Linkage path_linkage = Linkage::complete;
    RootMetric root_metric = RootMetric::euclidean;
    BundleParams bundle;          // np is kept in sync by solve_scenario
    std::uint64_t seed = 0;       // echo for provenance; not used by solve
};

// Exactly one of theta/modules must be set; theta requires theta*n >= 1.
int initial_module_count(const SolveSettings& settings, int n_terminals);

struct PhaseTimings {
    double total_ms = 0.0;
    double triangulate_ms = 0.0;
    double graph_ms = 0.0;
    double cluster_ms = 0.0;
    double paths_ms = 0.0;
    double optimize_ms = 0.0;
    double concat_ms = 0.0;
};

// Self-contained run output: everything needed to re-validate the forest.
struct ResultDocument {
    SolveSettings settings;
    Scenario scenario;
    int initial_modules = 0;
    Forest forest;  // the forest selected by the stopping policy
    int best_step = 0;
    CostTrace trace;
    PhaseTimings timings;
};

// Full pipeline: cluster terminals, build one tree per module, then run the
// dendrogram-guided concatenation. The observer (when set) sees the initial
// forest and the forest after every merge.
ResultDocument solve_scenario(const Scenario& scenario, const SolveSettings& settings,
                              const ForestObserver& observer = nullptr);

// Cost traces for several w_l values sharing one concatenation run when the
// policy is argmin (the merge schedule does not depend on the weights);
// early_stop reruns per w_l since the halting step varies.
std::vector<std::pair<double, CostTrace>> landscape_traces(const Scenario& scenario,
                                                           const SolveSettings& settings,
                                                           const std::vector<double>& wl_values);

struct BenchRow {
    std::uint64_t seed = 0;
    double theta = 0.0;
    int modules = 0;
    double total_ms = 0.0;
    double paths_ms = 0.0;
    double optimize_ms = 0.0;
    double mean_tree_length = 0.0;
    double mean_nodes_per_tree = 0.0;
    std::string error;  // empty on success
};

// Initial-forest statistics for one generated scenario (no concatenation):
// the per-module construction profile.
BenchRow bench_scenario(const ScenarioSpec& spec, double theta, int np);

}  // namespace sforest
