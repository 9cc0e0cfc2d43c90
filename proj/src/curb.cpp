#include "sidewalk/curb.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <utility>

#include "sidewalk/rng.hpp"

namespace sidewalk::curb {

std::vector<Point3> height_filter(const std::vector<Point3>& cloud,
                                  double eps_height) {
    std::vector<Point3> kept;
    for (const auto& p : cloud) {
        if (p.z < -eps_height) kept.push_back(p);
    }
    return kept;
}

namespace {

// One representative per grid cell keeps the hull stage cheap on dense
// clouds. The lexicographically smallest member is kept so the result does
// not depend on input order.
std::vector<Point2> voxel_downsample(const std::vector<Point2>& pts, double cell) {
    if (cell <= 0.0) return pts;
    std::map<std::pair<long long, long long>, Point2> best;
    for (const auto& p : pts) {
        const std::pair<long long, long long> key{
            static_cast<long long>(std::floor(p.x / cell)),
            static_cast<long long>(std::floor(p.y / cell))};
        auto it = best.find(key);
        if (it == best.end() || std::tie(p.x, p.y) < std::tie(it->second.x, it->second.y)) {
            best[key] = p;
        }
    }
    std::vector<Point2> out;
    out.reserve(best.size());
    for (const auto& [key, p] : best) out.push_back(p);
    return out;
}

// Tolerances for the line decomposition of the hull support. The hull is
// voxel-quantized, so membership needs a band wider than the cell; a second
// line must have real extent before it may compete with the dominant one.
constexpr double kLineBand = 0.25;
constexpr int kLineIterations = 64;
constexpr int kMinLineSupport = 8;
constexpr double kMinLineSpan = 1.5;

std::vector<int> line_inliers(const std::vector<Point2>& pts, const Line2& line) {
    std::vector<int> in;
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
        const Vec2 d = pts[i] - line.point;
        const double off = d.x * line.direction.y - d.y * line.direction.x;
        if (std::abs(off) <= kLineBand) in.push_back(i);
    }
    return in;
}

struct FittedLine {
    Line2 line;
    std::vector<int> inliers;
};

// Largest-consensus line among `pts`, refit by total least squares.
std::optional<FittedLine> ransac_line(const std::vector<Point2>& pts, Rng& rng) {
    const int n = static_cast<int>(pts.size());
    if (n < kMinLineSupport) return std::nullopt;
    std::vector<int> best;
    for (int it = 0; it < kLineIterations; ++it) {
        const int a = rng.uniform_int(0, n - 1);
        const int b = rng.uniform_int(0, n - 1);
        if (a == b) continue;
        Vec2 dir = pts[b] - pts[a];
        const double len = dir.norm();
        if (len < 1e-9) continue;
        const Line2 cand{pts[a], dir * (1.0 / len)};
        auto in = line_inliers(pts, cand);
        if (in.size() > best.size()) best = std::move(in);
    }
    if (static_cast<int>(best.size()) < kMinLineSupport) return std::nullopt;
    std::vector<Point2> sel;
    sel.reserve(best.size());
    for (int i : best) sel.push_back(pts[i]);
    const Line2 refit = geom::fit_line2(sel);
    return FittedLine{refit, line_inliers(pts, refit)};
}

double span_along(const std::vector<Point2>& pts, const FittedLine& f) {
    double lo = 1e18, hi = -1e18;
    for (int i : f.inliers) {
        const double t = (pts[i] - f.line.point).dot(f.line.direction);
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    return hi - lo;
}

}  // namespace

CurbEstimate estimate_curb(const std::vector<Point3>& S, const RobotPose& pose,
                           const Point2& waypoint, const CurbParams& params,
                           std::uint64_t seed) {
    if (static_cast<int>(S.size()) < params.min_points) {
        throw NoCurb("too few points below the wheel plane");
    }

    try {
        const auto fit =
            geom::ransac_plane(S, params.ransac_threshold, params.ransac_iterations, seed);
        std::vector<Point3> inliers;
        inliers.reserve(fit.inlier_indices.size());
        for (int i : fit.inlier_indices) inliers.push_back(S[i]);
        if (static_cast<int>(inliers.size()) < params.min_points) {
            throw NoCurb("street plane support too small");
        }

        const std::vector<Point2> flat = geom::project_to_plane(inliers, fit.plane);
        const std::vector<Point2> sparse = voxel_downsample(flat, params.voxel);
        const std::vector<Point2> hull_plane = geom::concave_hull(sparse, params.alpha);

        // The robot origin and waypoint expressed in the same plane basis.
        geom::Vec3 b1, b2;
        geom::plane_basis(fit.plane, b1, b2);
        const Point3 origin = fit.plane.normal * -fit.plane.offset;
        const auto to_plane = [&](const Point3& p) {
            const Point3 d = p - origin;
            return Point2{d.dot(b1), d.dot(b2)};
        };
        const Point2 robot_p = to_plane({0, 0, 0});

        std::vector<Point2> nearby;
        for (const auto& h : hull_plane) {
            if (h.dist(robot_p) <= params.window) nearby.push_back(h);
        }
        if (nearby.size() < 2) throw NoCurb("no curb structure near the robot");
        const geom::KdTree2 tree(nearby);
        const std::vector<Point2> support = geom::kd_nearest(
            tree, robot_p, std::min<int>(params.k_curb, nearby.size()));

        // Back to local 3D, then to the world frame.
        const auto to_local = [&](const Point2& q) {
            const Point3 p3 = origin + b1 * q.x + b2 * q.y;
            return Point2{p3.x, p3.y};
        };
        const double c = std::cos(pose.heading);
        const double s = std::sin(pose.heading);
        const auto to_world = [&](const Point2& local) {
            return Point2{pose.pos.x + local.x * c - local.y * s,
                          pose.pos.y + local.x * s + local.y * c};
        };
        const auto world_direction = [&](const Line2& line) {
            const Point2 dl =
                (to_local(line.point + line.direction) - to_local(line.point))
                    .normalized();
            return Vec2{dl.x * c - dl.y * s, dl.x * s + dl.y * c};
        };

        // At a corner the window holds two curb edges at right angles; a
        // single least-squares fit would cut diagonally between them and flip
        // from cycle to cycle as the point balance shifts. Decompose the
        // support into up to two consensus lines and follow the one whose
        // direction makes the most progress toward the waypoint.
        Line2 line_plane = geom::fit_line2(support);
        Rng line_rng(seed ^ 0x5851f42d4c957f2dull);
        if (const auto first = ransac_line(support, line_rng)) {
            line_plane = first->line;
            std::vector<char> used(support.size(), 0);
            for (int i : first->inliers) used[i] = 1;
            std::vector<Point2> rest;
            for (std::size_t i = 0; i < support.size(); ++i) {
                if (!used[i]) rest.push_back(support[i]);
            }
            if (const auto second = ransac_line(rest, line_rng)) {
                if (span_along(rest, *second) >= kMinLineSpan) {
                    Vec2 x_i = waypoint - pose.pos;
                    const double norm = x_i.norm();
                    if (norm > 1e-9) {
                        x_i = x_i * (1.0 / norm);
                        const double adv_first =
                            std::abs(world_direction(first->line).dot(x_i));
                        const double adv_second =
                            std::abs(world_direction(second->line).dot(x_i));
                        if (adv_second > adv_first) line_plane = second->line;
                    }
                }
            }
        }

        Vec2 dir_world = world_direction(line_plane);
        if (dir_world.dot(waypoint - pose.pos) < 0.0) {
            dir_world = dir_world * -1.0;
        }

        CurbEstimate est;
        est.hull.reserve(hull_plane.size());
        for (const auto& h : hull_plane) est.hull.push_back(to_world(to_local(h)));
        est.curb_line.point = to_world(to_local(line_plane.point));
        est.curb_line.direction = dir_world;

        // Lane hold: aim d_look ahead along the curb, d_lane off it on the
        // robot's side. At the target offset this collapses to a parallel
        // advance (zero steady-state heading error); off it, the subgoal
        // pulls the robot back toward the lane.
        const Vec2 to_robot = pose.pos - est.curb_line.point;
        const Point2 foot =
            est.curb_line.point + dir_world * to_robot.dot(dir_world);
        const Vec2 off = pose.pos - foot;
        const double off_norm = off.norm();
        if (off_norm > 1e-9) {
            est.subgoal = foot + off * (params.d_lane / off_norm) +
                          dir_world * params.d_look;
        } else {
            est.subgoal = pose.pos + dir_world * params.d_look;
        }
        return est;
    } catch (const geom::DegenerateInput& e) {
        throw NoCurb(std::string("degenerate curb geometry: ") + e.what());
    }
}

}  // namespace sidewalk::curb
