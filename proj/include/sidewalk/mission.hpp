#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sidewalk/avoidance.hpp"
#include "sidewalk/curb.hpp"
#include "sidewalk/surfing.hpp"
#include "sidewalk/tracking.hpp"
#include "sidewalk/world.hpp"

namespace sidewalk::mission {

using geom::Point2;

enum class Mode { Surfing, CurbFollowing, Complete, Blocked };

const char* mode_name(Mode m);

struct Mission {
    std::vector<Point2> waypoints;
    int current_index = 0;
    double goal_tolerance = 0.5;
    Mode mode = Mode::CurbFollowing;

    bool complete() const { return mode == Mode::Complete; }
    const Point2& active_waypoint() const { return waypoints[current_index]; }
};

// Advance the waypoint index when the robot is inside the tolerance circle;
// arriving at the last waypoint completes the mission.
void check_arrival(Mission& mission, const Point2& robot_position);

struct Arbitration {
    Mode mode = Mode::Blocked;
    std::optional<Point2> subgoal;
    std::optional<geom::Line2> lane;  // travel lane through the subgoal
    std::optional<int> group;
};

// Surf when a compliant group exists, fall back to the curb estimate, stop
// otherwise. When curb following within approach_radius of the waypoint, the
// subgoal becomes the waypoint itself: the curb-parallel subgoal holds the
// current lateral offset, which can leave a mid-sidewalk waypoint just
// outside the arrival tolerance forever. Zero disables the blend.
Arbitration arbitrate(const std::vector<tracking::Group>& groups,
                      const std::optional<curb::CurbEstimate>& curb_estimate,
                      const surfing::SurfContext& ctx,
                      std::optional<int> current_group = std::nullopt,
                      double approach_radius = 0.0);

enum class Outcome { Complete, Timeout, Blocked };

const char* outcome_name(Outcome o);

struct CycleLog {
    double t = 0.0;
    Point2 pos;
    double heading = 0.0;
    Mode mode = Mode::CurbFollowing;
    std::optional<Point2> subgoal;
    std::optional<int> group;
};

struct EpisodeParams {
    double control_period = 0.1;
    double max_time = 180.0;
    double ped_radius = 0.3;        // radius assumed for tracked pedestrians
    double scan_min_z = 0.05;       // cloud above this is a static obstacle
    double street_scan_z = -0.05;   // cloud below this is a street return
    double street_scan_range = 3.0; // street returns injected within this range
    double recovery_speed = 0.2;    // reverse speed while every candidate collides
    double recovery_speed_max = 0.5;  // reverse cap when a crowd presses in
    bool allow_surfing = true;
    bool allow_curb = true;
    double eps_switch = 0.05;  // speed advantage needed to drop the followed group
};

struct MissionConfig {
    EpisodeParams episode;
    tracking::TrackerParams tracker;
    curb::CurbParams curb;
    avoidance::AvoidanceParams avoid;
};

struct EpisodeResult {
    Outcome outcome = Outcome::Timeout;
    std::vector<CycleLog> log;
    // Ground-truth pedestrian positions per logged cycle, as (id, position).
    std::vector<std::vector<std::pair<int, Point2>>> ped_truth;
    double duration = 0.0;
    double min_clearance = 1e18;
    int curb_crossings = 0;
};

// Sense -> track -> arbitrate -> avoid -> step, at the control rate, until
// the mission completes or time runs out.
EpisodeResult run_episode(world::World& world, Mission mission,
                          const MissionConfig& config);

}  // namespace sidewalk::mission
