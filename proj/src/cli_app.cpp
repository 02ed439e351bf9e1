#include "sforest/cli_app.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "sforest/errors.hpp"
#include "sforest/json_io.hpp"
#include "sforest/svg.hpp"

namespace sforest {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_ms(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

struct ScenarioFlags {
    std::string map_path;
    std::uint64_t seed = 1;
    int nodes = 100;
    int obstacles = 5;
};

void add_scenario_flags(CLI::App* cmd, ScenarioFlags& f) {
    cmd->add_option("--map", f.map_path, "Load a map+terminals JSON file instead of generating");
    cmd->add_option("--seed", f.seed, "Scenario seed (when generating)");
    cmd->add_option("--nodes", f.nodes, "Terminal count (when generating)");
    cmd->add_option("--obstacles", f.obstacles, "Obstacle count (when generating)");
}

Scenario make_scenario(const ScenarioFlags& f) {
    Scenario sc;
    if (!f.map_path.empty()) {
        sc = map_from_json(read_file(f.map_path));
    } else {
        ScenarioSpec spec;
        spec.seed = f.seed;
        spec.n_terminals = f.nodes;
        spec.n_obstacles = f.obstacles;
        sc.map = generate_map(spec);
        sc.terminals = generate_terminals(sc.map, spec.n_terminals, spec.seed);
    }
    validate_scenario(sc);
    return sc;
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty())
        std::cout << content;
    else
        write_file(path, content);
}

std::string sibling_json_path(const std::string& csv_path) {
    const auto dot = csv_path.rfind('.');
    if (dot == std::string::npos) return csv_path + ".json";
    return csv_path.substr(0, dot) + ".json";
}

}  // namespace

int cli_run(std::vector<std::string> args) {
    CLI::App app{"Obstacle-avoiding Euclidean Steiner forests"};
    app.require_subcommand(1);

    // ---- mapgen ----
    auto* mapgen_cmd = app.add_subcommand("mapgen", "Generate a seeded map with terminals");
    std::uint64_t mg_seed = 1;
    int mg_nodes = 100, mg_obstacles = 5;
    std::string mg_out;
    mapgen_cmd->add_option("--seed", mg_seed, "Scenario seed");
    mapgen_cmd->add_option("--nodes", mg_nodes, "Terminal count");
    mapgen_cmd->add_option("--obstacles", mg_obstacles, "Obstacle count");
    mapgen_cmd->add_option("--out", mg_out, "Output JSON path (stdout when omitted)");

    // ---- solve ----
    auto* solve_cmd = app.add_subcommand("solve", "Compute a Steiner forest");
    ScenarioFlags solve_sc;
    add_scenario_flags(solve_cmd, solve_sc);
    double sv_theta = 0.0, sv_wl = 1.0, sv_wd = 0.0;
    int sv_modules = 0, sv_np = 20;
    std::string sv_policy = "argmin", sv_out, sv_svg;
    auto* theta_opt = solve_cmd->add_option("--theta", sv_theta, "Module fraction in (0,1]");
    auto* modules_opt = solve_cmd->add_option("--modules", sv_modules, "Initial module count");
    solve_cmd->add_option("--wl", sv_wl, "Weight on total tree length");
    solve_cmd->add_option("--wd", sv_wd, "Weight on root dispersion");
    solve_cmd->add_option("--np", sv_np, "Path-metric interpolation points");
    solve_cmd->add_option("--policy", sv_policy, "argmin | early_stop[:k:eps]");
    solve_cmd->add_option("--out", sv_out, "Result JSON path (stdout when omitted)");
    solve_cmd->add_option("--svg", sv_svg, "Also render the forest to this SVG path");

    // ---- landscape ----
    auto* land_cmd = app.add_subcommand("landscape", "Cost traces over a list of w_l values");
    ScenarioFlags land_sc;
    add_scenario_flags(land_cmd, land_sc);
    std::vector<double> ls_wl;
    double ls_wd = 0.5;
    int ls_np = 20;
    std::string ls_policy = "argmin", ls_out;
    double ls_theta = 0.0;
    int ls_modules = 0;
    auto* ls_theta_opt = land_cmd->add_option("--theta", ls_theta, "Module fraction in (0,1]");
    auto* ls_modules_opt = land_cmd->add_option("--modules", ls_modules, "Initial module count");
    land_cmd->add_option("--wl", ls_wl, "w_l values (repeatable)")->required()->expected(-1);
    land_cmd->add_option("--wd", ls_wd, "Weight on root dispersion");
    land_cmd->add_option("--np", ls_np, "Path-metric interpolation points");
    land_cmd->add_option("--policy", ls_policy, "argmin | early_stop[:k:eps]");
    land_cmd->add_option("--out", ls_out, "CSV path; a plot-ready JSON lands next to it");

    // ---- bench ----
    auto* bench_cmd = app.add_subcommand("bench", "Per-module construction statistics");
    std::vector<std::uint64_t> bn_seeds;
    std::vector<double> bn_thetas;
    int bn_nodes = 100, bn_obstacles = 5, bn_np = 20;
    std::string bn_out;
    bench_cmd->add_option("--seed", bn_seeds, "Seeds (repeatable)")->required()->expected(-1);
    bench_cmd->add_option("--theta", bn_thetas, "Theta values (repeatable)")->required()->expected(-1);
    bench_cmd->add_option("--nodes", bn_nodes, "Terminal count");
    bench_cmd->add_option("--obstacles", bn_obstacles, "Obstacle count");
    bench_cmd->add_option("--np", bn_np, "Path-metric interpolation points");
    bench_cmd->add_option("--out", bn_out, "CSV path (stdout when omitted)");

    // ---- render ----
    auto* render_cmd = app.add_subcommand("render", "Render an existing result JSON to SVG");
    std::string rd_in, rd_svg;
    render_cmd->add_option("result", rd_in, "Result JSON path")->required();
    render_cmd->add_option("--svg", rd_svg, "Output SVG path (stdout when omitted)");

    std::vector<char*> argv;
    std::string prog = "sforest";
    argv.push_back(prog.data());
    for (std::string& a : args) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (mapgen_cmd->parsed()) {
            ScenarioSpec spec;
            spec.seed = mg_seed;
            spec.n_terminals = mg_nodes;
            spec.n_obstacles = mg_obstacles;
            Scenario sc;
            sc.map = generate_map(spec);
            sc.terminals = generate_terminals(sc.map, spec.n_terminals, spec.seed);
            emit(mg_out, map_to_json(sc));
            return 0;
        }

        if (solve_cmd->parsed()) {
            const Scenario sc = make_scenario(solve_sc);
            SolveSettings settings;
            if (*theta_opt) settings.theta = sv_theta;
            if (*modules_opt) settings.modules = sv_modules;
            settings.weights = {sv_wl, sv_wd};
            settings.np = sv_np;
            settings.policy = policy_from_string(sv_policy);
            settings.seed = solve_sc.seed;
            const ResultDocument doc = solve_scenario(sc, settings);
            emit(sv_out, result_to_json(doc));
            if (!sv_svg.empty()) write_file(sv_svg, render_svg(doc.scenario, doc.forest));
            return 0;
        }

        if (land_cmd->parsed()) {
            const Scenario sc = make_scenario(land_sc);
            SolveSettings settings;
            if (*ls_theta_opt) settings.theta = ls_theta;
            if (*ls_modules_opt) settings.modules = ls_modules;
            settings.weights = {ls_wl.front(), ls_wd};
            settings.np = ls_np;
            settings.policy = policy_from_string(ls_policy);
            settings.seed = land_sc.seed;
            const auto traces = landscape_traces(sc, settings, ls_wl);

            std::string csv = "wl,step,s,lt,ld,f\n";
            std::string js = "{\"wd\":" + fmt17(ls_wd) + ",\"traces\":[";
            for (std::size_t ti = 0; ti < traces.size(); ++ti) {
                const auto& [wl, trace] = traces[ti];
                if (ti) js += ",";
                js += "{\"wl\":" + fmt17(wl) + ",\"records\":[";
                for (std::size_t ri = 0; ri < trace.records.size(); ++ri) {
                    const auto& r = trace.records[ri];
                    csv += fmt17(wl) + "," + std::to_string(r.step) + "," +
                           std::to_string(r.module_count) + "," + fmt17(r.lt) + "," + fmt17(r.ld) +
                           "," + fmt17(r.f) + "\n";
                    if (ri) js += ",";
                    js += "{\"step\":" + std::to_string(r.step) + ",\"s\":" +
                          std::to_string(r.module_count) + ",\"lt\":" + fmt17(r.lt) + ",\"ld\":" +
                          fmt17(r.ld) + ",\"f\":" + fmt17(r.f) + "}";
                }
                js += "]}";
            }
            js += "]}\n";
            emit(ls_out, csv);
            if (!ls_out.empty()) write_file(sibling_json_path(ls_out), js);
            return 0;
        }

        if (bench_cmd->parsed()) {
            std::sort(bn_seeds.begin(), bn_seeds.end());
            std::sort(bn_thetas.begin(), bn_thetas.end());
            std::string csv =
                "seed,theta,s,time_total_ms,time_paths_ms,time_optimize_ms,"
                "mean_tree_length,mean_nodes_per_tree,error\n";
            for (std::uint64_t seed : bn_seeds) {
                for (double theta : bn_thetas) {
                    ScenarioSpec spec;
                    spec.seed = seed;
                    spec.n_terminals = bn_nodes;
                    spec.n_obstacles = bn_obstacles;
                    const BenchRow row = bench_scenario(spec, theta, bn_np);
                    csv += std::to_string(row.seed) + "," + fmt17(row.theta) + ",";
                    if (row.error.empty()) {
                        csv += std::to_string(row.modules) + "," + fmt_ms(row.total_ms) + "," +
                               fmt_ms(row.paths_ms) + "," + fmt_ms(row.optimize_ms) + "," +
                               fmt17(row.mean_tree_length) + "," + fmt17(row.mean_nodes_per_tree) +
                               ",\n";
                    } else {
                        std::string msg = row.error;
                        std::replace(msg.begin(), msg.end(), ',', ';');
                        csv += ",,,,,," + msg + "\n";
                    }
                }
            }
            emit(bn_out, csv);
            return 0;
        }

        if (render_cmd->parsed()) {
            const ResultDocument doc = result_from_json(read_file(rd_in));
            emit(rd_svg, render_svg(doc.scenario, doc.forest));
            return 0;
        }
    } catch (const NoPathError& ex) {
        std::cerr << "error (infeasible): " << ex.what() << "\n";
        return 2;
    } catch (const NoCandidateError& ex) {
        std::cerr << "error (infeasible): " << ex.what() << "\n";
        return 2;
    } catch (const GenerationError& ex) {
        std::cerr << "error (generation): " << ex.what() << "\n";
        return 3;
    } catch (const ValidationError& ex) {
        std::cerr << "error (validation): " << ex.what() << "\n";
        return 1;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace sforest
