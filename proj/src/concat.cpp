#include "sforest/concat.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "sforest/errors.hpp"

namespace sforest {

CostBreakdown cost(const Forest& forest, const Weights& w) {
    if (w.wl == 0.0 && w.wd == 0.0)
        throw ValidationError("cost: weights w_l and w_d must not both be zero");
    CostBreakdown out;
    for (const ForestEntry& e : forest.entries) out.lt += e.tree.total_length;
    for (std::size_t i = 0; i < forest.entries.size(); ++i)
        for (std::size_t j = i + 1; j < forest.entries.size(); ++j)
            out.ld += distance(forest.entries[i].module.root(), forest.entries[j].module.root());
    out.f = w.wl * out.lt + w.wd * out.ld;
    return out;
}

ForestEntry concat_trees(const ForestEntry& a, const ForestEntry& b, int merged_id,
                         const PlannerContext& ctx) {
    std::set<int> seen(a.module.terminal_ids.begin(), a.module.terminal_ids.end());
    for (int id : b.module.terminal_ids)
        if (!seen.insert(id).second)
            throw ValidationError("concat_trees: terminal " + std::to_string(id) +
                                  " appears in both trees");

    // Union ordered by global terminal id.
    std::vector<std::pair<int, Point2>> merged;
    for (std::size_t i = 0; i < a.module.terminal_ids.size(); ++i)
        merged.push_back({a.module.terminal_ids[i], a.module.terminals[i]});
    for (std::size_t i = 0; i < b.module.terminal_ids.size(); ++i)
        merged.push_back({b.module.terminal_ids[i], b.module.terminals[i]});
    std::sort(merged.begin(), merged.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });

    Module mod;
    mod.id = merged_id;
    for (const auto& [id, pt] : merged) {
        mod.terminal_ids.push_back(id);
        mod.terminals.push_back(pt);
    }
    mod.root_index = select_root(mod.terminals);

    // Prior Steiner points seed the search in the rebuilt tree.
    std::vector<Point2> warm;
    for (const SteinerTree* t : {&a.tree, &b.tree})
        for (const auto& node : t->nodes)
            if (node.kind == NodeKind::steiner) warm.push_back(node.point);

    ForestEntry out;
    out.module = mod;
    out.tree = build_tree(mod, ctx, warm);
    return out;
}

ConcatResult run_concatenation(const Forest& initial, const Dendrogram& z_modules,
                               const Weights& w, const StopPolicy& policy,
                               const PlannerContext& ctx, const ForestObserver& observer) {
    if (static_cast<int>(initial.entries.size()) != z_modules.leaf_count)
        throw ValidationError("run_concatenation: dendrogram leaves != forest size");
    if (w.wl == 0.0 && w.wd == 0.0)
        throw ValidationError("run_concatenation: weights must not both be zero");

    Forest forest = initial;
    forest.step = 0;

    ConcatResult result;
    CostBreakdown c = cost(forest, w);
    result.trace.records.push_back(
        {0, static_cast<int>(forest.entries.size()), c.lt, c.ld, c.f});
    result.best = forest;
    result.best_step = 0;
    double best_f = c.f;
    if (observer) observer(forest);

    // Dendrogram node -> current position in forest.entries.
    const int s = z_modules.leaf_count;
    std::vector<int> slot(static_cast<std::size_t>(s) + z_modules.merges.size(), -1);
    for (int i = 0; i < s; ++i) slot[static_cast<std::size_t>(i)] = i;

    double prev_f = c.f;
    int flat_steps = 0;

    for (std::size_t k = 0; k < z_modules.merges.size(); ++k) {
        const auto& mg = z_modules.merges[k];
        int pi = slot[static_cast<std::size_t>(mg.left)];
        int pj = slot[static_cast<std::size_t>(mg.right)];
        if (pi < 0 || pj < 0 || pi == pj)
            throw ValidationError("run_concatenation: merge references an unavailable module");
        if (pi > pj) std::swap(pi, pj);

        ForestEntry merged = concat_trees(forest.entries[static_cast<std::size_t>(pi)],
                                          forest.entries[static_cast<std::size_t>(pj)],
                                          s + static_cast<int>(k), ctx);
        forest.entries[static_cast<std::size_t>(pi)] = std::move(merged);
        forest.entries.erase(forest.entries.begin() + pj);
        for (int& v : slot) {
            if (v == pj) v = -1;
            else if (v > pj) --v;
        }
        slot[static_cast<std::size_t>(s) + k] = pi;
        forest.step += 1;

        c = cost(forest, w);
        result.trace.records.push_back(
            {forest.step, static_cast<int>(forest.entries.size()), c.lt, c.ld, c.f});
        if (observer) observer(forest);

        if (c.f < best_f) {
            best_f = c.f;
            result.best = forest;
            result.best_step = forest.step;
        }

        if (policy.kind == StopKind::early_stop) {
            const double rel = (prev_f - c.f) / std::max(std::abs(prev_f), 1e-300);
            flat_steps = rel < policy.eps ? flat_steps + 1 : 0;
            if (flat_steps >= policy.patience) break;
        }
        prev_f = c.f;
    }
    return result;
}

}  // namespace sforest
