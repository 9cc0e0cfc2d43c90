#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sidewalk/scenario.hpp"

namespace sidewalk::runner {

struct RunConfig {
    std::string scenario_path;
    int trials = 10;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    std::string mode = "auto";  // auto | surf | curb
    std::vector<std::string> overrides;
};

// Run the batch: `trials` robot episodes and `trials` scripted-pedestrian
// episodes (trial i is seeded with seed + i), one shortest path, metric
// comparison, and all artifacts under out_dir. Returns the process exit
// status: 0 when every robot episode completes, 1 when any does not, 2 on
// configuration or planning errors.
int run(const RunConfig& config);

// Pieces exposed for tests and the acceptance harness.
std::vector<geom::Point2> plan_shortest_path(const scenario::Scenario& scn);
mission::MissionConfig mission_config(const scenario::Scenario& scn,
                                      const std::string& mode);
mission::EpisodeResult run_robot_trial(const scenario::Scenario& scn,
                                       const std::string& mode,
                                       std::uint64_t seed);
// Scripted social-force pedestrian routed through the mission waypoints;
// returns its timestamped path.
std::vector<std::pair<double, geom::Point2>> run_pedestrian_trial(
    const scenario::Scenario& scn, std::uint64_t seed);

}  // namespace sidewalk::runner
