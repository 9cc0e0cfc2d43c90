#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sidewalk/avoidance.hpp"
#include "sidewalk/curb.hpp"
#include "sidewalk/mission.hpp"
#include "sidewalk/tracking.hpp"
#include "sidewalk/world.hpp"

namespace sidewalk::scenario {

using geom::Point2;

// Every tunable for one run, grouped by module.
struct Params {
    world::WorldParams world;
    tracking::TrackerParams tracker;
    curb::CurbParams curb;
    avoidance::AvoidanceParams avoid;
    mission::EpisodeParams episode;
};

// A pedestrian template. count > 1 expands into a formation around `base`;
// per-trial variation draws speeds within +-speed_spread and positions
// within +-pos_jitter from the trial seed.
struct PedSpawn {
    world::SimPedestrian base;
    int count = 1;
    double spacing = 0.6;
    double speed_spread = 0.0;
    double pos_jitter = 0.0;
};

struct Scenario {
    std::string name;
    world::SidewalkMap map;
    world::RobotState robot;
    std::vector<Point2> waypoints;
    double goal_tolerance = 0.5;
    double comparison_speed = 1.2;  // scripted reference pedestrian
    std::vector<PedSpawn> spawns;
    Params params;
};

// Parse a scenario JSON file; throws std::runtime_error with the parser's
// position diagnostics on malformed input or unknown parameter names.
Scenario load_scenario(const std::string& path);

// Concrete pedestrian list for one trial.
std::vector<world::SimPedestrian> instantiate_pedestrians(const Scenario& scn,
                                                          std::uint64_t seed);

// Named access to every tunable (sorted names). Overrides parse "key=value";
// integer-valued parameters round, boolean ones accept 0/1.
std::vector<std::string> param_names();
double get_param(const Scenario& scn, const std::string& key);
void set_param(Scenario& scn, const std::string& key, double value);
void apply_override(Scenario& scn, const std::string& expr);

}  // namespace sidewalk::scenario
