#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sidewalk/geometry.hpp"

namespace sidewalk::curb {

using geom::Line2;
using geom::Point2;
using geom::Point3;
using geom::Vec2;

struct CurbParams {
    double eps_height = 0.02;      // strictly-below cut for the wheel plane
    double ransac_threshold = 0.05;
    int ransac_iterations = 200;
    double alpha = 5.0;            // concave hull ball radius
    int k_curb = 50;               // hull points used for the line fit
    double window = 5.0;           // ignore hull points farther than this
    double d_look = 3.0;           // subgoal distance along the curb direction
    double d_lane = 1.2;           // target lateral standoff from the curb line
    int min_points = 30;
    double voxel = 0.2;            // hull-stage downsample cell (0 disables)
};

struct RobotPose {
    Point2 pos;
    double heading = 0.0;
};

// All outputs are in the world frame.
struct CurbEstimate {
    std::vector<Point2> hull;
    Line2 curb_line;
    Point2 subgoal;
};

struct NoCurb : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Keep exactly the points strictly below the wheel-contact plane.
std::vector<Point3> height_filter(const std::vector<Point3>& cloud,
                                  double eps_height);

// Street-plane RANSAC, least-squares refit, projection, concave hull, then a
// consensus line through the hull points nearest the robot (up to two lines
// are decomposed near corners; the one advancing toward the waypoint wins).
// The subgoal sits d_look along the curb direction oriented toward the
// waypoint, offset d_lane from the curb line on the robot's side, so the
// robot converges back to a steady lane after each avoidance maneuver
// instead of ratcheting toward the curb. `S` is in the robot-local frame
// (wheel plane z=0).
CurbEstimate estimate_curb(const std::vector<Point3>& S, const RobotPose& pose,
                           const Point2& waypoint, const CurbParams& params,
                           std::uint64_t seed = 9001);

}  // namespace sidewalk::curb
