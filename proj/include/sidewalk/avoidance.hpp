#pragma once

#include <optional>
#include <vector>

#include "sidewalk/geometry.hpp"

namespace sidewalk::avoidance {

using geom::Point2;
using geom::Vec2;

struct Agent {
    Point2 pos;
    Vec2 vel;
    double radius = 0.3;
    bool is_static = false;  // injected structure return, not a pedestrian
};

struct NavState {
    Point2 robot_pos;
    double robot_heading = 0.0;
    Vec2 robot_vel;
    double robot_radius = 0.3;
    Point2 subgoal;
    // Reference travel lane (through the subgoal, along the travel
    // direction). The line robot->subgoal cannot express a standing lateral
    // offset — it always passes through the robot — so lane keeping needs
    // this external anchor. Absent, deviation is measured from the
    // robot->subgoal corridor.
    std::optional<geom::Line2> lane;
    std::vector<Agent> agents;  // pedestrians and injected statics
};

struct NavAction {
    double v = 0.0;
    double w = 0.0;
    bool blocked = false;  // every candidate collided; v and w are zero
};

struct AvoidanceParams {
    double v_max = 0.8;
    double w_max = 1.0;
    int n_v = 11;
    int n_w = 21;
    double horizon = 3.0;
    double horizon_dt = 0.1;
    double margin = 0.2;           // added to the radius sum for r_safe
    double margin_oncoming = 0.15; // extra margin against oncoming agents
    double r_static = 0.1;
    double delta_static = 0.5;
    // Social shaping: oncoming agents should end up on the robot's left with
    // at least pass_offset of lateral room; the robot prefers the right half
    // of its corridor toward the subgoal but is also pulled back onto the
    // corridor line itself, so avoidance maneuvers do not ratchet it ever
    // further sideways.
    double pass_offset = 0.3;
    double w_pass = 2.0;
    double w_keep_right = 0.08;
    double w_lane = 0.25;
    double oncoming_speed = 0.1;  // heading-opposed speed above this is oncoming
};

// Append zero-velocity agents for static structure: curb points arrive as a
// polyline (resampled every delta_static), scan obstacles as a point set
// (greedily thinned to delta_static spacing). Agents end up sorted by
// distance to the robot.
void inject_statics(NavState& state, const std::vector<Point2>& curb_polyline,
                    const std::vector<Point2>& scan_obstacles,
                    const AvoidanceParams& params);

// Deterministic sampled policy over a (v, w) grid: forward-simulate each
// candidate against constant-velocity agent predictions, reject collisions,
// score progress minus social penalties, break ties toward the lowest
// candidate index.
NavAction policy(const NavState& state, const AvoidanceParams& params);

}  // namespace sidewalk::avoidance
