#include "doctest.h"

#include <cmath>
#include <vector>

#include "sidewalk/curb.hpp"

using namespace sidewalk;
using namespace sidewalk::curb;
using geom::Point2;
using geom::Point3;

namespace {

// Robot-local cloud of a straight street band to the robot's right: sidewalk
// returns at z=0, street returns at z=-drop beyond the curb at y = curb_y.
std::vector<Point3> straight_scene(double curb_y = -1.5, double drop = 0.1,
                                   double rot_deg = 0.0) {
    std::vector<Point3> cloud;
    const double c = std::cos(rot_deg * M_PI / 180.0);
    const double s = std::sin(rot_deg * M_PI / 180.0);
    auto push = [&](double x, double y, double z) {
        cloud.push_back({x * c - y * s, x * s + y * c, z});
    };
    for (double x = -8.0; x <= 8.0; x += 0.25) {
        for (double y = curb_y + 8.0; y >= curb_y; y -= 0.25) {
            push(x, y, 0.0);  // sidewalk plane, filtered out
        }
        for (double y = curb_y - 0.25; y >= curb_y - 6.5; y -= 0.25) {
            push(x, y, -drop);
        }
    }
    return cloud;
}

double deg(double rad) { return rad * 180.0 / M_PI; }

}  // namespace

TEST_SUITE("curb") {

TEST_CASE("height_filter keeps strictly-below points") {
    const std::vector<Point3> cloud = {{1, 0, 0.0}, {2, 0, -0.05}, {3, 0, -0.12}};
    const auto kept = height_filter(cloud, 0.02);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].z == -0.05);
    CHECK(kept[1].z == -0.12);
    CHECK(height_filter({}, 0.02).empty());
    CHECK(height_filter({{0, 0, 0}, {1, 1, 0}}, 0.02).empty());
}

TEST_CASE("straight curb: line parallel to the street edge, subgoal ahead") {
    const auto S = height_filter(straight_scene(), 0.02);
    REQUIRE(S.size() > 100);
    const CurbParams params;
    const RobotPose pose{{0, 0}, 0.0};
    const auto est = estimate_curb(S, pose, {10, 0}, params);

    const double ang = std::atan2(est.curb_line.direction.y, est.curb_line.direction.x);
    CHECK(std::abs(deg(geom::angle_diff(ang, 0.0))) < 2.0);
    CHECK(est.subgoal.x == doctest::Approx(3.0).epsilon(0.02));
    CHECK(std::abs(est.subgoal.y) < 0.1);

    // Parallel-through-robot construction: exact direction match, and the
    // subgoal keeps the robot's perpendicular offset from the curb line.
    const geom::Vec2 to_sub = est.subgoal - pose.pos;
    CHECK(std::abs(to_sub.cross(est.curb_line.direction)) < 1e-9 * params.d_look);
    CHECK(std::abs(est.curb_line.dist(est.subgoal) - est.curb_line.dist(pose.pos)) <
          1e-9);
    // The fitted line sits on the curb, about 1.5 m to the robot's right.
    CHECK(est.curb_line.dist(pose.pos) == doctest::Approx(1.5).epsilon(0.15));
}

TEST_CASE("rotated street rotates the estimate") {
    const auto S = height_filter(straight_scene(-1.5, 0.1, 30.0), 0.02);
    const CurbParams params;
    const RobotPose pose{{0, 0}, 0.0};
    const Point2 wp{10.0 * std::cos(M_PI / 6), 10.0 * std::sin(M_PI / 6)};
    const auto est = estimate_curb(S, pose, wp, params);
    const double ang = std::atan2(est.curb_line.direction.y, est.curb_line.direction.x);
    CHECK(std::abs(deg(geom::angle_diff(ang, M_PI / 6))) < 2.0);
    CHECK(est.subgoal.dist({3.0 * std::cos(M_PI / 6), 3.0 * std::sin(M_PI / 6)}) < 0.15);
}

TEST_CASE("waypoint behind the robot flips the subgoal direction") {
    const auto S = height_filter(straight_scene(), 0.02);
    const auto est = estimate_curb(S, {{0, 0}, 0.0}, {-10, 0}, CurbParams{});
    CHECK(est.subgoal.x == doctest::Approx(-3.0).epsilon(0.02));
}

TEST_CASE("rigid transform equivariance of pose and waypoint") {
    const auto S = height_filter(straight_scene(), 0.02);
    const CurbParams params;
    const auto base = estimate_curb(S, {{0, 0}, 0.0}, {10, 0}, params);

    const double th = 40.0 * M_PI / 180.0;
    const Point2 shift{5.0, -2.0};
    auto transform = [&](const Point2& p) {
        return Point2{shift.x + p.x * std::cos(th) - p.y * std::sin(th),
                      shift.y + p.x * std::sin(th) + p.y * std::cos(th)};
    };
    const auto moved = estimate_curb(S, {shift, th}, transform({10, 0}), params);
    CHECK(moved.subgoal.dist(transform(base.subgoal)) < 1e-6);
    const double want =
        std::atan2(base.curb_line.direction.y, base.curb_line.direction.x) + th;
    const double got =
        std::atan2(moved.curb_line.direction.y, moved.curb_line.direction.x);
    CHECK(std::abs(geom::angle_diff(got, want)) < 1e-6);
}

TEST_CASE("NoCurb on thin input") {
    const CurbParams params;
    std::vector<Point3> few;
    for (int i = 0; i < params.min_points - 1; ++i) {
        few.push_back({0.1 * i, -2.0, -0.1});
    }
    CHECK_THROWS_AS(estimate_curb(few, {{0, 0}, 0.0}, {10, 0}, params), NoCurb);
    CHECK(height_filter(straight_scene(-1.5, 0.0), 0.02).empty());
}

}  // TEST_SUITE
