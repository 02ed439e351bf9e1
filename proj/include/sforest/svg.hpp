#pragma once

#include <string>

#include "sforest/run.hpp"

namespace sforest {

// Renders the map and forest: obstacles as filled polygons, terminals as
// small discs, roots as larger discs, and one <g> of colored polylines per
// tree.
std::string render_svg(const Scenario& sc, const Forest& forest);

}  // namespace sforest
