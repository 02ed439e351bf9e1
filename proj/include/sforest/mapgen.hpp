#pragma once

#include <cstdint>
#include <vector>

#include "sforest/geometry.hpp"

namespace sforest {

// Experiment scenario knobs; the defaults match the 200x200 benchmark world
// with five 7-edge obstacles and 100 terminals.
struct ScenarioSpec {
    std::uint64_t seed = 1;
    double side = 200.0;
    int n_obstacles = 5;
    int obstacle_edges = 7;
    int n_terminals = 100;
};

// Seeded star-polygon obstacles: center drawn with a margin, `obstacle_edges`
// sorted random angles, radii uniform in [0.05, 0.15]*side; candidates are
// rejected until they clear existing obstacles by 0.01*side. Throws
// GenerationError when an obstacle cannot be placed within 10^4 attempts.
MapEnv generate_map(const ScenarioSpec& spec);

// n terminals uniform over free space by rejection sampling, with a minimum
// pairwise separation of 10^-3*side. Throws GenerationError after 10^6 draws.
std::vector<Point2> generate_terminals(const MapEnv& map, int n, std::uint64_t seed);

}  // namespace sforest
