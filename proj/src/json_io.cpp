#include "sforest/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sforest/errors.hpp"

namespace sforest {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt(const Point2& p) { return "[" + fmt(p.x) + "," + fmt(p.y) + "]"; }

std::string policy_string_impl(const StopPolicy& p) {
    if (p.kind == StopKind::argmin) return "argmin";
    return "early_stop:" + std::to_string(p.patience) + ":" + fmt(p.eps);
}

StopPolicy parse_policy_impl(const std::string& text) {
    StopPolicy p;
    if (text == "argmin") return p;
    if (text.rfind("early_stop", 0) == 0) {
        p.kind = StopKind::early_stop;
        std::istringstream in(text.substr(10));
        char sep;
        if (in >> sep && sep == ':') {
            if (!(in >> p.patience)) throw ValidationError("policy: bad patience in '" + text + "'");
            if (in >> sep && sep == ':' && !(in >> p.eps))
                throw ValidationError("policy: bad epsilon in '" + text + "'");
        }
        if (p.patience < 1 || !(p.eps > 0.0))
            throw ValidationError("policy: patience must be >= 1 and eps > 0");
        return p;
    }
    throw ValidationError("policy: expected 'argmin' or 'early_stop[:k:eps]', got '" + text + "'");
}

void append_scenario(std::string& out, const Scenario& sc) {
    out += "{\"side\":" + fmt(sc.map.side) + ",\"obstacles\":[";
    for (std::size_t i = 0; i < sc.map.obstacles.size(); ++i) {
        if (i) out += ",";
        out += "[";
        const auto& verts = sc.map.obstacles[i].vertices;
        for (std::size_t j = 0; j < verts.size(); ++j) {
            if (j) out += ",";
            out += fmt(verts[j]);
        }
        out += "]";
    }
    out += "],\"terminals\":[";
    for (std::size_t i = 0; i < sc.terminals.size(); ++i) {
        if (i) out += ",";
        out += fmt(sc.terminals[i]);
    }
    out += "]}";
}

Scenario scenario_from(const json& j) {
    Scenario sc;
    sc.map.side = j.at("side").get<double>();
    for (const auto& poly : j.at("obstacles")) {
        Polygon p;
        for (const auto& v : poly) p.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
        sc.map.obstacles.push_back(std::move(p));
    }
    for (const auto& v : j.at("terminals"))
        sc.terminals.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    sc.map.id = map_content_hash(sc.map);
    return sc;
}

const char* kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::root: return "root";
        case NodeKind::steiner: return "steiner";
        default: return "terminal";
    }
}

NodeKind kind_from(const std::string& s) {
    if (s == "root") return NodeKind::root;
    if (s == "steiner") return NodeKind::steiner;
    if (s == "terminal") return NodeKind::terminal;
    throw ValidationError("result: unknown node kind '" + s + "'");
}

void append_tree(std::string& out, const ForestEntry& entry) {
    const Module& m = entry.module;
    const SteinerTree& t = entry.tree;
    out += "{\"module_id\":" + std::to_string(m.id) + ",\"terminal_ids\":[";
    for (std::size_t i = 0; i < m.terminal_ids.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(m.terminal_ids[i]);
    }
    out += "],\"root_index\":" + std::to_string(m.root_index);
    out += ",\"root_node\":" + std::to_string(t.root_node);
    out += ",\"total_length\":" + fmt(t.total_length);
    out += ",\"nodes\":[";
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        if (i) out += ",";
        const auto& n = t.nodes[i];
        out += "{\"x\":" + fmt(n.point.x) + ",\"y\":" + fmt(n.point.y) + ",\"kind\":\"" +
               kind_name(n.kind) + "\",\"terminal_id\":" + std::to_string(n.terminal_id) + "}";
    }
    out += "],\"edges\":[";
    for (std::size_t i = 0; i < t.edges.size(); ++i) {
        if (i) out += ",";
        const auto& e = t.edges[i];
        out += "{\"a\":" + std::to_string(e.a) + ",\"b\":" + std::to_string(e.b) +
               ",\"length\":" + fmt(e.polyline.length) + ",\"waypoints\":[";
        for (std::size_t wj = 0; wj < e.polyline.waypoints.size(); ++wj) {
            if (wj) out += ",";
            out += fmt(e.polyline.waypoints[wj]);
        }
        out += "]}";
    }
    out += "]}";
}

ForestEntry tree_from(const json& j) {
    ForestEntry entry;
    Module& m = entry.module;
    m.id = j.at("module_id").get<int>();
    for (const auto& id : j.at("terminal_ids")) m.terminal_ids.push_back(id.get<int>());
    m.root_index = j.at("root_index").get<int>();

    SteinerTree& t = entry.tree;
    t.root_node = j.at("root_node").get<int>();
    t.total_length = j.at("total_length").get<double>();
    for (const auto& n : j.at("nodes")) {
        SteinerTree::Node node;
        node.point = {n.at("x").get<double>(), n.at("y").get<double>()};
        node.kind = kind_from(n.at("kind").get<std::string>());
        node.terminal_id = n.at("terminal_id").get<int>();
        t.nodes.push_back(node);
    }
    for (const auto& e : j.at("edges")) {
        SteinerTree::Edge edge;
        edge.a = e.at("a").get<int>();
        edge.b = e.at("b").get<int>();
        edge.polyline.length = e.at("length").get<double>();
        for (const auto& w : e.at("waypoints"))
            edge.polyline.waypoints.push_back({w.at(0).get<double>(), w.at(1).get<double>()});
        t.edges.push_back(std::move(edge));
    }
    // Module terminal coordinates live on the tree's terminal nodes.
    m.terminals.assign(m.terminal_ids.size(), Point2{});
    std::vector<char> found(m.terminal_ids.size(), 0);
    for (const auto& node : t.nodes) {
        if (node.terminal_id < 0) continue;
        for (std::size_t i = 0; i < m.terminal_ids.size(); ++i)
            if (m.terminal_ids[i] == node.terminal_id) {
                m.terminals[i] = node.point;
                found[i] = 1;
            }
    }
    for (char f : found)
        if (!f) throw ValidationError("result: tree is missing a module terminal node");
    return entry;
}

}  // namespace

std::string policy_to_string(const StopPolicy& p) { return policy_string_impl(p); }

StopPolicy policy_from_string(const std::string& text) { return parse_policy_impl(text); }

std::string map_to_json(const Scenario& sc) {
    std::string out;
    append_scenario(out, sc);
    out += "\n";
    return out;
}

Scenario map_from_json(const std::string& text) {
    try {
        return scenario_from(json::parse(text));
    } catch (const json::exception& ex) {
        throw ValidationError(std::string("map: invalid JSON: ") + ex.what());
    }
}

std::string result_to_json(const ResultDocument& doc) {
    std::string out = "{\"config\":{";
    out += "\"seed\":" + std::to_string(doc.settings.seed);
    if (doc.settings.theta) out += ",\"theta\":" + fmt(*doc.settings.theta);
    if (doc.settings.modules) out += ",\"modules\":" + std::to_string(*doc.settings.modules);
    out += ",\"wl\":" + fmt(doc.settings.weights.wl);
    out += ",\"wd\":" + fmt(doc.settings.weights.wd);
    out += ",\"np\":" + std::to_string(doc.settings.np);
    out += ",\"policy\":\"" + policy_to_string(doc.settings.policy) + "\"";
    out += std::string(",\"terminal_linkage\":\"") +
           (doc.settings.terminal_linkage == Linkage::single ? "single" : "complete") + "\"";
    out += std::string(",\"path_linkage\":\"") +
           (doc.settings.path_linkage == Linkage::single ? "single" : "complete") + "\"";
    out += std::string(",\"root_metric\":\"") +
           (doc.settings.root_metric == RootMetric::geodesic ? "geodesic" : "euclidean") + "\"";
    out += ",\"improvement_tol\":" + fmt(doc.settings.bundle.improvement_tol);
    out += ",\"max_refine_iters\":" + std::to_string(doc.settings.bundle.max_refine_iters);
    out += ",\"candidate_triangle_cap\":" + std::to_string(doc.settings.bundle.candidate_triangle_cap);
    out += "},\"scenario\":";
    append_scenario(out, doc.scenario);
    out += ",\"initial_modules\":" + std::to_string(doc.initial_modules);
    out += ",\"best_step\":" + std::to_string(doc.best_step);
    out += ",\"forest\":{\"step\":" + std::to_string(doc.forest.step) + ",\"trees\":[";
    for (std::size_t i = 0; i < doc.forest.entries.size(); ++i) {
        if (i) out += ",";
        append_tree(out, doc.forest.entries[i]);
    }
    out += "]},\"trace\":[";
    for (std::size_t i = 0; i < doc.trace.records.size(); ++i) {
        if (i) out += ",";
        const auto& r = doc.trace.records[i];
        out += "{\"step\":" + std::to_string(r.step) + ",\"s\":" + std::to_string(r.module_count) +
               ",\"lt\":" + fmt(r.lt) + ",\"ld\":" + fmt(r.ld) + ",\"f\":" + fmt(r.f) + "}";
    }
    out += "],\"timings\":{";
    out += "\"total_ms\":" + fmt(doc.timings.total_ms);
    out += ",\"triangulate_ms\":" + fmt(doc.timings.triangulate_ms);
    out += ",\"graph_ms\":" + fmt(doc.timings.graph_ms);
    out += ",\"cluster_ms\":" + fmt(doc.timings.cluster_ms);
    out += ",\"paths_ms\":" + fmt(doc.timings.paths_ms);
    out += ",\"optimize_ms\":" + fmt(doc.timings.optimize_ms);
    out += ",\"concat_ms\":" + fmt(doc.timings.concat_ms);
    out += "}}\n";
    return out;
}

ResultDocument result_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        ResultDocument doc;
        const json& cfg = j.at("config");
        doc.settings.seed = cfg.at("seed").get<std::uint64_t>();
        if (cfg.contains("theta")) doc.settings.theta = cfg.at("theta").get<double>();
        if (cfg.contains("modules")) doc.settings.modules = cfg.at("modules").get<int>();
        doc.settings.weights.wl = cfg.at("wl").get<double>();
        doc.settings.weights.wd = cfg.at("wd").get<double>();
        doc.settings.np = cfg.at("np").get<int>();
        doc.settings.policy = policy_from_string(cfg.at("policy").get<std::string>());
        doc.settings.terminal_linkage =
            cfg.at("terminal_linkage").get<std::string>() == "single" ? Linkage::single
                                                                      : Linkage::complete;
        doc.settings.path_linkage = cfg.at("path_linkage").get<std::string>() == "single"
                                        ? Linkage::single
                                        : Linkage::complete;
        doc.settings.root_metric = cfg.at("root_metric").get<std::string>() == "geodesic"
                                       ? RootMetric::geodesic
                                       : RootMetric::euclidean;
        doc.settings.bundle.np = doc.settings.np;
        doc.settings.bundle.improvement_tol = cfg.at("improvement_tol").get<double>();
        doc.settings.bundle.max_refine_iters = cfg.at("max_refine_iters").get<int>();
        doc.settings.bundle.candidate_triangle_cap = cfg.at("candidate_triangle_cap").get<int>();

        doc.scenario = scenario_from(j.at("scenario"));
        doc.initial_modules = j.at("initial_modules").get<int>();
        doc.best_step = j.at("best_step").get<int>();
        doc.forest.step = j.at("forest").at("step").get<int>();
        for (const auto& t : j.at("forest").at("trees")) doc.forest.entries.push_back(tree_from(t));
        for (const auto& r : j.at("trace")) {
            CostRecord rec;
            rec.step = r.at("step").get<int>();
            rec.module_count = r.at("s").get<int>();
            rec.lt = r.at("lt").get<double>();
            rec.ld = r.at("ld").get<double>();
            rec.f = r.at("f").get<double>();
            doc.trace.records.push_back(rec);
        }
        const json& tm = j.at("timings");
        doc.timings.total_ms = tm.at("total_ms").get<double>();
        doc.timings.triangulate_ms = tm.at("triangulate_ms").get<double>();
        doc.timings.graph_ms = tm.at("graph_ms").get<double>();
        doc.timings.cluster_ms = tm.at("cluster_ms").get<double>();
        doc.timings.paths_ms = tm.at("paths_ms").get<double>();
        doc.timings.optimize_ms = tm.at("optimize_ms").get<double>();
        doc.timings.concat_ms = tm.at("concat_ms").get<double>();
        return doc;
    } catch (const json::exception& ex) {
        throw ValidationError(std::string("result: invalid JSON: ") + ex.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << content;
}

}  // namespace sforest
