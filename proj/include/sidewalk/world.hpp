#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sidewalk/geometry.hpp"
#include "sidewalk/rng.hpp"

namespace sidewalk::world {

using geom::Point2;
using geom::Point3;
using geom::Vec2;

struct Disc {
    Point2 center;
    double radius = 0.0;
};

struct CurbSpec {
    std::vector<Point2> polyline;
    double drop = 0.1;  // street surface sits this far below the sidewalk
};

struct StreetSpec {
    std::vector<Point2> polygon;
    double drop = 0.1;
};

// Static world geometry. Walkable polygons cover sidewalks and crosswalks;
// wall polygons are buildings (tall returns in the cloud); street polygons
// produce returns below the wheel-contact plane.
struct SidewalkMap {
    std::vector<std::vector<Point2>> walkable;
    std::vector<StreetSpec> streets;
    std::vector<std::vector<Point2>> walls;
    std::vector<CurbSpec> curbs;
    std::vector<Disc> obstacles;
    std::vector<Point2> waypoints;

    bool is_walkable(const Point2& p) const;
    bool in_wall(const Point2& p) const;
    bool in_obstacle(const Point2& p) const;
    // Drop height if p lies on a street polygon.
    std::optional<double> street_drop(const Point2& p) const;
    void bounds(Point2& lo, Point2& hi) const;
};

struct RobotState {
    Point2 pos;
    double heading = 0.0;
    double v = 0.0;       // commanded linear velocity, applied directly
    double w = 0.0;       // commanded angular velocity
    double radius = 0.3;
    double v_max = 0.8;

    Vec2 velocity() const { return geom::heading_vec(heading) * v; }
};

struct SimPedestrian {
    int id = 0;
    Point2 pos;
    Vec2 vel;
    double desired_speed = 1.47;
    double radius = 0.3;
    std::vector<Point2> route;
    int route_idx = 0;
    bool loop = false;
    double start_time = 0.0;
    double depart_time = 1e18;
    bool avoid_robot = true;
    bool active = false;
};

struct Detection {
    int id = 0;
    Point2 position;  // world frame
    Vec2 velocity;
};

struct SensorFrame {
    double timestamp = 0.0;
    std::vector<Point3> cloud;  // robot-local, wheel-contact plane at z=0
    std::vector<Detection> detections;
};

struct WorldParams {
    double dt = 0.05;
    double tau = 0.5;
    double a_ped = 3.0;
    double b_ped = 0.3;
    double a_obs = 3.0;
    double b_obs = 0.2;
    double a_max = 5.0;
    double speed_cap = 1.3;       // times desired_speed
    double route_tol = 0.4;
    double det_range = 10.0;
    double det_fov_deg = 180.0;
    double det_noise = 0.0;
    double lidar_range = 8.0;
    double lidar_az_step_deg = 1.5;
    double lidar_range_step = 0.25;
};

// One boundary or obstacle segment that repels pedestrians.
struct BoundarySegment {
    Point2 a;
    Point2 b;
};

// Social force on one pedestrian: relaxation toward the desired velocity,
// exponential repulsion from neighbours and from boundary segments/discs.
// The robot participates as a plain neighbour when it should be avoided.
struct NeighborAgent {
    Point2 pos;
    double radius = 0.3;
};

Vec2 social_force(const SimPedestrian& p, const Vec2& desired_vel,
                  const std::vector<NeighborAgent>& neighbours,
                  const std::vector<BoundarySegment>& boundary,
                  const std::vector<Disc>& obstacles, const WorldParams& params);

struct NoPath : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shortest route between two walkable points: 8-connected grid Dijkstra on
// the robot-radius-inflated free space, then line-of-sight smoothing.
std::vector<Point2> shortest_path(const SidewalkMap& map, const Point2& start,
                                  const Point2& goal, double robot_radius,
                                  double grid_step = 0.1);

class World {
public:
    World(SidewalkMap map, RobotState robot, std::vector<SimPedestrian> peds,
          WorldParams params, std::uint64_t seed);

    void set_robot_command(double v, double w);
    void step();
    SensorFrame sense();

    double time() const { return time_; }
    const SidewalkMap& map() const { return map_; }
    const RobotState& robot() const { return robot_; }
    const std::vector<SimPedestrian>& pedestrians() const { return peds_; }
    const WorldParams& params() const { return params_; }

    // Ground-truth episode bookkeeping.
    double min_clearance() const { return min_clearance_; }
    int curb_crossings() const { return curb_crossings_; }

    // Boundary segments that repel pedestrians (walkable-union edges minus
    // seams shared between two walkable polygons). Exposed for tests.
    const std::vector<BoundarySegment>& boundary_segments() const {
        return boundary_;
    }

private:
    void integrate_pedestrians();
    void integrate_robot();
    void update_bookkeeping(const Point2& robot_before);
    Vec2 desired_velocity(SimPedestrian& p) const;

    SidewalkMap map_;
    RobotState robot_;
    std::vector<SimPedestrian> peds_;
    WorldParams params_;
    Rng rng_;
    double time_ = 0.0;
    std::vector<BoundarySegment> boundary_;
    double min_clearance_ = 1e18;
    int curb_crossings_ = 0;
};

}  // namespace sidewalk::world
