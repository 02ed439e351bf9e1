#include "sforest/run.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "sforest/errors.hpp"
#include "sforest/triangulation.hpp"

namespace sforest {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(const Clock::time_point& t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

void validate_scenario(Scenario& sc) {
    validate_map(sc.map);
    for (std::size_t i = 0; i < sc.terminals.size(); ++i) {
        const Point2& p = sc.terminals[i];
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw ValidationError("scenario: terminal " + std::to_string(i) + " is not finite");
        if (p.x < 0 || p.y < 0 || p.x > sc.map.side || p.y > sc.map.side)
            throw ValidationError("scenario: terminal " + std::to_string(i) + " outside bounds");
        for (std::size_t oi = 0; oi < sc.map.obstacles.size(); ++oi)
            if (point_in_polygon(p, sc.map.obstacles[oi], sc.map.eps()))
                throw ValidationError("scenario: terminal " + std::to_string(i) +
                                      " lies inside obstacle " + std::to_string(oi));
        for (std::size_t j = 0; j < i; ++j)
            if (sc.terminals[j] == p)
                throw ValidationError("scenario: terminals " + std::to_string(j) + " and " +
                                      std::to_string(i) + " coincide");
    }
}

int initial_module_count(const SolveSettings& settings, int n_terminals) {
    if (settings.theta.has_value() == settings.modules.has_value())
        throw ValidationError("settings: exactly one of theta/modules must be given");
    if (n_terminals < 1) throw ValidationError("settings: need at least one terminal");
    if (settings.modules) {
        if (*settings.modules < 1) throw ValidationError("settings: modules must be >= 1");
        return std::min(*settings.modules, n_terminals);
    }
    const double theta = *settings.theta;
    if (!(theta > 0.0) || theta > 1.0)
        throw ValidationError("settings: theta must lie in (0, 1]");
    if (theta * n_terminals < 1.0)
        throw ValidationError("settings: theta * n must be at least 1");
    const int s = static_cast<int>(std::lround(theta * n_terminals));
    return std::max(1, std::min(s, n_terminals));
}

ResultDocument solve_scenario(const Scenario& scenario, const SolveSettings& settings,
                              const ForestObserver& observer) {
    const auto t_start = Clock::now();
    ResultDocument doc;
    doc.settings = settings;
    doc.settings.bundle.np = settings.np;
    doc.scenario = scenario;
    validate_scenario(doc.scenario);

    const int n = static_cast<int>(doc.scenario.terminals.size());
    const int s_request = initial_module_count(settings, n);

    auto t0 = Clock::now();
    const FreeSpaceTriangulation tri = triangulate_free_space(doc.scenario.map);
    doc.timings.triangulate_ms = ms_since(t0);

    t0 = Clock::now();
    const GeodesicOracle oracle(doc.scenario.map, doc.scenario.terminals);
    doc.timings.graph_ms = ms_since(t0) - oracle.paths_ms();

    BuildStats stats;
    PlannerContext ctx;
    ctx.map = &doc.scenario.map;
    ctx.tri = &tri;
    ctx.oracle = &oracle;
    ctx.params = doc.settings.bundle;
    ctx.path_linkage = settings.path_linkage;
    ctx.stats = &stats;

    t0 = Clock::now();
    const std::vector<Point2>& pts = doc.scenario.terminals;
    const Dendrogram z = agglomerate(
        n, [&](int i, int j) { return distance(pts[static_cast<std::size_t>(i)],
                                               pts[static_cast<std::size_t>(j)]); },
        settings.terminal_linkage);
    const ClusterCut cut = cut_to_modules(z, s_request);
    const Dendrogram z_modules = condense_above_cut(z, cut);
    doc.timings.cluster_ms = ms_since(t0);
    doc.initial_modules = cut.module_count;

    Forest forest;
    for (int mid = 0; mid < cut.module_count; ++mid) {
        Module mod;
        mod.id = mid;
        for (int leaf = 0; leaf < n; ++leaf) {
            if (cut.assignment[static_cast<std::size_t>(leaf)] != mid) continue;
            mod.terminal_ids.push_back(leaf);
            mod.terminals.push_back(pts[static_cast<std::size_t>(leaf)]);
        }
        mod.root_index = settings.root_metric == RootMetric::geodesic
                             ? select_root_geodesic(mod.terminals, oracle)
                             : select_root(mod.terminals);
        ForestEntry entry;
        entry.module = mod;
        entry.tree = build_tree(mod, ctx);
        forest.entries.push_back(std::move(entry));
    }

    t0 = Clock::now();
    ConcatResult concat = run_concatenation(forest, z_modules, settings.weights,
                                            settings.policy, ctx, observer);
    doc.timings.concat_ms = ms_since(t0);

    doc.forest = std::move(concat.best);
    doc.best_step = concat.best_step;
    doc.trace = std::move(concat.trace);
    doc.timings.paths_ms = oracle.paths_ms();
    doc.timings.optimize_ms = stats.optimize_ms;
    doc.timings.total_ms = ms_since(t_start);
    return doc;
}

std::vector<std::pair<double, CostTrace>> landscape_traces(const Scenario& scenario,
                                                           const SolveSettings& settings,
                                                           const std::vector<double>& wl_values) {
    if (wl_values.empty()) throw ValidationError("landscape: no w_l values");
    std::vector<std::pair<double, CostTrace>> out;

    if (settings.policy.kind == StopKind::argmin) {
        // One run; F rescales per w_l from the recorded (L_t, L_d).
        SolveSettings s = settings;
        s.weights.wl = wl_values.front();
        const ResultDocument doc = solve_scenario(scenario, s);
        for (double wl : wl_values) {
            CostTrace t = doc.trace;
            for (CostRecord& r : t.records) r.f = wl * r.lt + settings.weights.wd * r.ld;
            out.push_back({wl, std::move(t)});
        }
        return out;
    }
    for (double wl : wl_values) {
        SolveSettings s = settings;
        s.weights.wl = wl;
        out.push_back({wl, solve_scenario(scenario, s).trace});
    }
    return out;
}

BenchRow bench_scenario(const ScenarioSpec& spec, double theta, int np) {
    BenchRow row;
    row.seed = spec.seed;
    row.theta = theta;
    try {
        const auto t_start = Clock::now();
        Scenario sc;
        sc.map = generate_map(spec);
        sc.terminals = generate_terminals(sc.map, spec.n_terminals, spec.seed);
        validate_scenario(sc);

        const int n = static_cast<int>(sc.terminals.size());
        SolveSettings settings;
        settings.theta = theta;
        settings.np = np;
        const int s_request = initial_module_count(settings, n);

        const FreeSpaceTriangulation tri = triangulate_free_space(sc.map);
        const GeodesicOracle oracle(sc.map, sc.terminals);
        BuildStats stats;
        PlannerContext ctx;
        ctx.map = &sc.map;
        ctx.tri = &tri;
        ctx.oracle = &oracle;
        ctx.params.np = np;
        ctx.stats = &stats;

        const std::vector<Point2>& pts = sc.terminals;
        const Dendrogram z = agglomerate(
            n, [&](int i, int j) { return distance(pts[static_cast<std::size_t>(i)],
                                                   pts[static_cast<std::size_t>(j)]); },
            Linkage::complete);
        const ClusterCut cut = cut_to_modules(z, s_request);

        double total_len = 0.0;
        long total_nodes = 0;
        for (int mid = 0; mid < cut.module_count; ++mid) {
            Module mod;
            mod.id = mid;
            for (int leaf = 0; leaf < n; ++leaf) {
                if (cut.assignment[static_cast<std::size_t>(leaf)] != mid) continue;
                mod.terminal_ids.push_back(leaf);
                mod.terminals.push_back(pts[static_cast<std::size_t>(leaf)]);
            }
            mod.root_index = select_root(mod.terminals);
            const SteinerTree tree = build_tree(mod, ctx);
            total_len += tree.total_length;
            total_nodes += static_cast<long>(tree.nodes.size());
        }

        row.modules = cut.module_count;
        row.mean_tree_length = total_len / cut.module_count;
        row.mean_nodes_per_tree = static_cast<double>(total_nodes) / cut.module_count;
        row.paths_ms = oracle.paths_ms();
        row.optimize_ms = stats.optimize_ms;
        row.total_ms = ms_since(t_start);
    } catch (const std::exception& ex) {
        row.error = ex.what();
    }
    return row;
}

}  // namespace sforest
