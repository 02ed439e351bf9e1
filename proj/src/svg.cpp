#include "sforest/svg.hpp"

#include <cstdio>

namespace sforest {

namespace {

const char* kPalette[] = {
    "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2",
    "#17becf", "#bcbd22", "#7f7f7f", "#aec7e8", "#98df8a", "#ff9896", "#c5b0d5",
    "#ffbb78", "#c49c94", "#f7b6d2", "#9edae5", "#dbdb8d", "#393b79",
};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

std::string render_svg(const Scenario& sc, const Forest& forest) {
    const double side = sc.map.side;
    const double stroke = side / 400.0;
    const double r_small = side / 250.0;
    const double r_root = side / 110.0;
    const double r_steiner = side / 400.0;

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 " +
           num(side) + " " + num(side) + "\">\n";
    // Flip y so the math coordinate frame reads naturally.
    out += "<g transform=\"translate(0," + num(side) + ") scale(1,-1)\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + num(side) + "\" height=\"" + num(side) +
           "\" fill=\"#ffffff\" stroke=\"#333333\" stroke-width=\"" + num(stroke) + "\"/>\n";

    out += "<g id=\"obstacles\">\n";
    for (const Polygon& poly : sc.map.obstacles) {
        out += "<polygon points=\"";
        for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
            if (i) out += " ";
            out += num(poly.vertices[i].x) + "," + num(poly.vertices[i].y);
        }
        out += "\" fill=\"#7f9cc4\" stroke=\"#3d5a87\" stroke-width=\"" + num(stroke) + "\"/>\n";
    }
    out += "</g>\n";

    for (std::size_t ti = 0; ti < forest.entries.size(); ++ti) {
        const auto& entry = forest.entries[ti];
        const char* color = kPalette[ti % kPaletteSize];
        out += "<g id=\"tree-" + std::to_string(entry.module.id) + "\" stroke=\"" + color +
               "\" fill=\"none\" stroke-width=\"" + num(stroke * 1.4) + "\">\n";
        for (const auto& e : entry.tree.edges) {
            out += "<polyline points=\"";
            for (std::size_t i = 0; i < e.polyline.waypoints.size(); ++i) {
                if (i) out += " ";
                out += num(e.polyline.waypoints[i].x) + "," + num(e.polyline.waypoints[i].y);
            }
            out += "\"/>\n";
        }
        for (const auto& node : entry.tree.nodes)
            if (node.kind == NodeKind::steiner)
                out += "<circle cx=\"" + num(node.point.x) + "\" cy=\"" + num(node.point.y) +
                       "\" r=\"" + num(r_steiner) + "\" fill=\"#222222\" stroke=\"none\"/>\n";
        out += "</g>\n";
    }

    out += "<g id=\"terminals\">\n";
    for (const auto& entry : forest.entries) {
        for (const auto& node : entry.tree.nodes) {
            if (node.kind == NodeKind::root)
                out += "<circle cx=\"" + num(node.point.x) + "\" cy=\"" + num(node.point.y) +
                       "\" r=\"" + num(r_root) + "\" fill=\"#1f4fd6\" stroke=\"#0c2a78\" stroke-width=\"" +
                       num(stroke) + "\"/>\n";
            else if (node.kind == NodeKind::terminal)
                out += "<circle cx=\"" + num(node.point.x) + "\" cy=\"" + num(node.point.y) +
                       "\" r=\"" + num(r_small) + "\" fill=\"#111111\"/>\n";
        }
    }
    out += "</g>\n</g>\n</svg>\n";
    return out;
}

}  // namespace sforest
