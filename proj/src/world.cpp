#include "sidewalk/world.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace sidewalk::world {

using geom::wrap_angle;

bool SidewalkMap::is_walkable(const Point2& p) const {
    for (const auto& poly : walkable) {
        if (geom::point_in_polygon(p, poly)) return true;
    }
    return false;
}

bool SidewalkMap::in_wall(const Point2& p) const {
    for (const auto& poly : walls) {
        if (geom::point_in_polygon(p, poly)) return true;
    }
    return false;
}

bool SidewalkMap::in_obstacle(const Point2& p) const {
    for (const auto& d : obstacles) {
        if (p.dist(d.center) <= d.radius) return true;
    }
    return false;
}

std::optional<double> SidewalkMap::street_drop(const Point2& p) const {
    for (const auto& s : streets) {
        if (geom::point_in_polygon(p, s.polygon)) return s.drop;
    }
    return std::nullopt;
}

void SidewalkMap::bounds(Point2& lo, Point2& hi) const {
    lo = {1e18, 1e18};
    hi = {-1e18, -1e18};
    auto grow = [&](const Point2& p) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    };
    for (const auto& poly : walkable) {
        for (const auto& p : poly) grow(p);
    }
    for (const auto& s : streets) {
        for (const auto& p : s.polygon) grow(p);
    }
    for (const auto& poly : walls) {
        for (const auto& p : poly) grow(p);
    }
}

Vec2 social_force(const SimPedestrian& p, const Vec2& desired_vel,
                  const std::vector<NeighborAgent>& neighbours,
                  const std::vector<BoundarySegment>& boundary,
                  const std::vector<Disc>& obstacles, const WorldParams& params) {
    Vec2 a = (desired_vel - p.vel) / params.tau;

    for (const auto& n : neighbours) {
        const Vec2 away = p.pos - n.pos;
        const double d = away.norm();
        if (d < 1e-9) continue;
        const double arg = (p.radius + n.radius - d) / params.b_ped;
        if (arg < -8.0) continue;  // negligible at this range
        a += away / d * (params.a_ped * std::exp(arg));
    }

    auto repel_surface = [&](const Point2& surface_point, double gap_extra) {
        const Vec2 away = p.pos - surface_point;
        const double d = away.norm() - gap_extra;
        if (away.norm() < 1e-9) return;
        const double arg = (p.radius - d) / params.b_obs;
        if (arg < -8.0) return;
        a += away / away.norm() * (params.a_obs * std::exp(arg));
    };
    for (const auto& seg : boundary) {
        repel_surface(geom::closest_point_on_segment(p.pos, seg.a, seg.b), 0.0);
    }
    for (const auto& d : obstacles) {
        repel_surface(d.center, d.radius);
    }

    const double mag = a.norm();
    if (mag > params.a_max) a = a * (params.a_max / mag);
    return a;
}

namespace {

void force_ccw(std::vector<Point2>& poly) {
    if (geom::polygon_signed_area(poly) < 0.0) {
        std::reverse(poly.begin(), poly.end());
    }
}

}  // namespace

World::World(SidewalkMap map, RobotState robot, std::vector<SimPedestrian> peds,
             WorldParams params, std::uint64_t seed)
    : map_(std::move(map)),
      robot_(robot),
      peds_(std::move(peds)),
      params_(params),
      rng_(seed) {
    for (auto& poly : map_.walkable) force_ccw(poly);
    for (auto& poly : map_.walls) force_ccw(poly);
    for (auto& s : map_.streets) force_ccw(s.polygon);

    for (const auto& p : peds_) {
        if (p.desired_speed <= 0.0 || p.desired_speed > 2.5) {
            throw std::invalid_argument("pedestrian desired_speed out of (0, 2.5]");
        }
        if (p.radius < 0.2 || p.radius > 0.5) {
            throw std::invalid_argument("pedestrian radius out of [0.2, 0.5]");
        }
    }
    std::sort(peds_.begin(), peds_.end(),
              [](const SimPedestrian& a, const SimPedestrian& b) { return a.id < b.id; });

    // Boundary segments: walkable edges chopped to ~0.5 m, dropping seams where
    // the far side of the edge is still walkable (polygon-to-polygon joins).
    for (const auto& poly : map_.walkable) {
        const std::size_t n = poly.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point2& a = poly[i];
            const Point2& b = poly[(i + 1) % n];
            const double len = a.dist(b);
            const int pieces = std::max(1, static_cast<int>(std::ceil(len / 0.5)));
            const Vec2 dir = (b - a) / static_cast<double>(pieces);
            const Vec2 out = Vec2{dir.y, -dir.x}.normalized();  // CCW: right side is outside
            for (int k = 0; k < pieces; ++k) {
                const Point2 pa = a + dir * static_cast<double>(k);
                const Point2 pb = a + dir * static_cast<double>(k + 1);
                const Point2 probe = (pa + pb) * 0.5 + out * 0.01;
                if (!map_.is_walkable(probe)) {
                    boundary_.push_back({pa, pb});
                }
            }
        }
    }

    for (auto& p : peds_) {
        p.active = false;
    }
}

void World::set_robot_command(double v, double w) {
    robot_.v = std::clamp(v, -robot_.v_max, robot_.v_max);
    robot_.w = w;
}

Vec2 World::desired_velocity(SimPedestrian& p) const {
    if (p.route.empty()) return {0.0, 0.0};
    int guard = 0;
    while (p.pos.dist(p.route[p.route_idx]) < params_.route_tol &&
           guard++ < static_cast<int>(p.route.size())) {
        if (p.route_idx + 1 < static_cast<int>(p.route.size())) {
            ++p.route_idx;
        } else if (p.loop) {
            p.route_idx = 0;
        } else {
            return {0.0, 0.0};  // arrived, stand still
        }
    }
    const Vec2 to_goal = p.route[p.route_idx] - p.pos;
    const double d = to_goal.norm();
    if (d < 1e-9) return {0.0, 0.0};
    return to_goal / d * p.desired_speed;
}

void World::integrate_pedestrians() {
    const double dt = params_.dt;
    std::vector<Vec2> accel(peds_.size(), Vec2{0, 0});
    std::vector<Vec2> des(peds_.size(), Vec2{0, 0});

    for (std::size_t i = 0; i < peds_.size(); ++i) {
        auto& p = peds_[i];
        if (!p.active) continue;
        des[i] = desired_velocity(p);
        std::vector<NeighborAgent> neighbours;
        for (std::size_t j = 0; j < peds_.size(); ++j) {
            if (j == i || !peds_[j].active) continue;
            neighbours.push_back({peds_[j].pos, peds_[j].radius});
        }
        if (p.avoid_robot) {
            neighbours.push_back({robot_.pos, robot_.radius});
        }
        accel[i] = social_force(p, des[i], neighbours, boundary_, map_.obstacles,
                                params_);
    }

    for (std::size_t i = 0; i < peds_.size(); ++i) {
        auto& p = peds_[i];
        if (!p.active) continue;
        Vec2 v = p.vel + accel[i] * dt;
        const double cap = params_.speed_cap * p.desired_speed;
        const double speed = v.norm();
        if (speed > cap) v = v * (cap / speed);

        Point2 next = p.pos + v * dt;
        if (map_.is_walkable(next)) {
            p.pos = next;
            p.vel = v;
            continue;
        }
        // Slide along the nearest boundary segment instead of leaving the map.
        double best = 1e18;
        Vec2 tangent{0, 0};
        for (const auto& seg : boundary_) {
            const double d = geom::dist_point_segment(p.pos, seg.a, seg.b);
            if (d < best) {
                best = d;
                tangent = (seg.b - seg.a).normalized();
            }
        }
        const Vec2 slide = tangent * v.dot(tangent);
        next = p.pos + slide * dt;
        if (best < 1e18 && map_.is_walkable(next)) {
            p.pos = next;
            p.vel = slide;
        } else {
            p.vel = {0.0, 0.0};
        }
    }
}

void World::integrate_robot() {
    const double dt = params_.dt;
    robot_.pos.x += robot_.v * std::cos(robot_.heading) * dt;
    robot_.pos.y += robot_.v * std::sin(robot_.heading) * dt;
    robot_.heading = wrap_angle(robot_.heading + robot_.w * dt);
}

void World::update_bookkeeping(const Point2& robot_before) {
    for (const auto& p : peds_) {
        if (!p.active) continue;
        const double clearance = robot_.pos.dist(p.pos) - robot_.radius - p.radius;
        min_clearance_ = std::min(min_clearance_, clearance);
    }
    for (const auto& curb : map_.curbs) {
        bool crossed = false;
        for (std::size_t i = 0; i + 1 < curb.polyline.size() && !crossed; ++i) {
            crossed = geom::segments_intersect(robot_before, robot_.pos,
                                               curb.polyline[i], curb.polyline[i + 1]);
        }
        if (crossed) {
            ++curb_crossings_;
            break;
        }
    }
}

void World::step() {
    for (auto& p : peds_) {
        const bool now = time_ >= p.start_time && time_ < p.depart_time;
        if (now && !p.active) {
            p.active = true;
            p.vel = desired_velocity(p);  // spawn already walking
        } else if (!now) {
            p.active = false;
        }
    }
    const Point2 robot_before = robot_.pos;
    integrate_pedestrians();
    integrate_robot();
    time_ += params_.dt;
    update_bookkeeping(robot_before);
}

SensorFrame World::sense() {
    SensorFrame frame;
    frame.timestamp = time_;

    const double half_fov = params_.det_fov_deg * M_PI / 180.0 / 2.0;
    for (const auto& p : peds_) {
        if (!p.active) continue;
        const Vec2 rel = p.pos - robot_.pos;
        const double range = rel.norm();
        if (range > params_.det_range) continue;
        if (range > 1e-9) {
            const double bearing =
                geom::angle_diff(std::atan2(rel.y, rel.x), robot_.heading);
            if (std::abs(bearing) > half_fov) continue;
        }
        Detection det{p.id, p.pos, p.vel};
        if (params_.det_noise > 0.0) {
            det.position.x += rng_.gaussian(0.0, params_.det_noise);
            det.position.y += rng_.gaussian(0.0, params_.det_noise);
        }
        frame.detections.push_back(det);
    }

    const int n_az =
        std::max(1, static_cast<int>(std::round(360.0 / params_.lidar_az_step_deg)));
    const int n_r =
        std::max(1, static_cast<int>(std::round(params_.lidar_range / params_.lidar_range_step)));
    const double cos_h = std::cos(robot_.heading);
    const double sin_h = std::sin(robot_.heading);
    for (int ia = 0; ia < n_az; ++ia) {
        const double az = -M_PI + 2.0 * M_PI * ia / n_az;
        const double cu = std::cos(az);
        const double su = std::sin(az);
        for (int ir = 1; ir <= n_r; ++ir) {
            const double r = ir * params_.lidar_range_step;
            const double lx = r * cu;
            const double ly = r * su;
            const Point2 q{robot_.pos.x + lx * cos_h - ly * sin_h,
                           robot_.pos.y + lx * sin_h + ly * cos_h};
            if (map_.in_wall(q) || map_.in_obstacle(q)) {
                frame.cloud.push_back({lx, ly, 0.1});
                frame.cloud.push_back({lx, ly, 0.2});
                frame.cloud.push_back({lx, ly, 0.3});
                break;  // occluded past the first structure hit
            }
            if (map_.is_walkable(q)) {
                frame.cloud.push_back({lx, ly, 0.0});
            } else if (const auto drop = map_.street_drop(q)) {
                frame.cloud.push_back({lx, ly, -*drop});
            }
        }
    }
    return frame;
}

namespace {

struct GridNode {
    double dist;
    int idx;
    bool operator>(const GridNode& o) const {
        return dist > o.dist || (dist == o.dist && idx > o.idx);
    }
};

}  // namespace

std::vector<Point2> shortest_path(const SidewalkMap& map, const Point2& start,
                                  const Point2& goal, double robot_radius,
                                  double grid_step) {
    if (!map.is_walkable(start) || !map.is_walkable(goal)) {
        throw NoPath("start or goal outside the sidewalk");
    }

    Point2 lo, hi;
    map.bounds(lo, hi);
    lo -= {grid_step, grid_step};
    hi += {grid_step, grid_step};
    const int nx = static_cast<int>(std::floor((hi.x - lo.x) / grid_step)) + 1;
    const int ny = static_cast<int>(std::floor((hi.y - lo.y) / grid_step)) + 1;
    const auto at = [&](int ix, int iy) {
        return Point2{lo.x + ix * grid_step, lo.y + iy * grid_step};
    };

    // Free space: the walkable union inflated inward by the robot radius,
    // tested with a ring of samples around each candidate point.
    const auto free_point = [&](const Point2& p) {
        if (!map.is_walkable(p)) return false;
        for (int k = 0; k < 16; ++k) {
            const double a = 2.0 * M_PI * k / 16;
            if (!map.is_walkable(p + Vec2{std::cos(a), std::sin(a)} * robot_radius)) {
                return false;
            }
        }
        return true;
    };

    std::vector<char> free_cell(static_cast<std::size_t>(nx) * ny, 0);
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            free_cell[static_cast<std::size_t>(iy) * nx + ix] = free_point(at(ix, iy));
        }
    }

    const auto snap = [&](const Point2& p) -> int {
        int best = -1;
        double best_d = 1e18;
        const int cx = static_cast<int>(std::round((p.x - lo.x) / grid_step));
        const int cy = static_cast<int>(std::round((p.y - lo.y) / grid_step));
        const int reach = static_cast<int>(std::ceil(1.0 / grid_step));
        for (int dy = -reach; dy <= reach; ++dy) {
            for (int dx = -reach; dx <= reach; ++dx) {
                const int ix = cx + dx;
                const int iy = cy + dy;
                if (ix < 0 || iy < 0 || ix >= nx || iy >= ny) continue;
                if (!free_cell[static_cast<std::size_t>(iy) * nx + ix]) continue;
                const double d = p.dist(at(ix, iy));
                if (d < best_d) {
                    best_d = d;
                    best = iy * nx + ix;
                }
            }
        }
        return best;
    };

    const int s = snap(start);
    const int g = snap(goal);
    if (s < 0 || g < 0) throw NoPath("no free grid cell near start or goal");

    const int dxs[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    const int dys[8] = {0, 0, 1, -1, 1, -1, 1, -1};
    const double step_cost[8] = {1, 1, 1, 1, M_SQRT2, M_SQRT2, M_SQRT2, M_SQRT2};

    std::vector<double> dist(free_cell.size(), 1e18);
    std::vector<int> prev(free_cell.size(), -1);
    std::priority_queue<GridNode, std::vector<GridNode>, std::greater<>> open;
    dist[s] = 0.0;
    open.push({0.0, s});
    while (!open.empty()) {
        const auto [d, idx] = open.top();
        open.pop();
        if (d > dist[idx]) continue;
        if (idx == g) break;
        const int ix = idx % nx;
        const int iy = idx / nx;
        for (int k = 0; k < 8; ++k) {
            const int jx = ix + dxs[k];
            const int jy = iy + dys[k];
            if (jx < 0 || jy < 0 || jx >= nx || jy >= ny) continue;
            const int jdx = jy * nx + jx;
            if (!free_cell[jdx]) continue;
            const double nd = d + step_cost[k] * grid_step;
            if (nd < dist[jdx]) {
                dist[jdx] = nd;
                prev[jdx] = idx;
                open.push({nd, jdx});
            }
        }
    }
    if (dist[g] >= 1e18) throw NoPath("goal unreachable");

    std::vector<Point2> raw;
    raw.push_back(goal);
    for (int cur = g; cur != -1; cur = prev[cur]) {
        raw.push_back(at(cur % nx, cur / nx));
    }
    raw.push_back(start);
    std::reverse(raw.begin(), raw.end());

    const auto segment_free = [&](const Point2& a, const Point2& b) {
        const double len = a.dist(b);
        const int steps = std::max(1, static_cast<int>(std::ceil(len / (grid_step / 2))));
        for (int k = 0; k <= steps; ++k) {
            if (!free_point(a + (b - a) * (static_cast<double>(k) / steps))) return false;
        }
        return true;
    };

    std::vector<Point2> out;
    out.push_back(raw.front());
    std::size_t anchor = 0;
    while (anchor + 1 < raw.size()) {
        std::size_t far = anchor + 1;
        for (std::size_t j = raw.size() - 1; j > anchor; --j) {
            if (segment_free(raw[anchor], raw[j])) {
                far = j;
                break;
            }
        }
        out.push_back(raw[far]);
        anchor = far;
    }
    return out;
}

}  // namespace sidewalk::world
