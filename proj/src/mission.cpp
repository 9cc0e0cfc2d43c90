#include "sidewalk/mission.hpp"

#include <algorithm>
#include <cmath>

namespace sidewalk::mission {

namespace {

// All forward candidates collide only when the robot is already inside the
// safety radius of something. Back out along whichever slow reverse arc ends
// with the most room, so a jam against a wall or curb resolves even when the
// robot sits parallel to it (where blind straight reverse gains nothing).
// Retreat speed scales with how fast the nearest agent is pressing in: a
// crowd column can close faster than the base reverse speed, and backing
// away slower than the pressure arrives guarantees contact. The cap bounds
// the risk of reversing into space the forward-facing detector cannot see.
avoidance::NavAction escape_action(const avoidance::NavState& state,
                                   const avoidance::AvoidanceParams& params,
                                   double base_speed, double max_speed) {
    double press = 0.0;
    for (const auto& a : state.agents) {
        const geom::Vec2 to_robot = state.robot_pos - a.pos;
        const double d = to_robot.norm();
        const double gap = d - state.robot_radius - a.radius;
        if (d < 1e-9 || gap > 0.8) continue;
        press = std::max(press, a.vel.dot(to_robot / d));
    }
    const double speed =
        std::clamp(press + 0.1, base_speed, std::max(base_speed, max_speed));
    const double ws[] = {-params.w_max, -0.5 * params.w_max, 0.0,
                         0.5 * params.w_max, params.w_max};
    const double dt = params.horizon_dt;
    const int steps = 5;
    avoidance::NavAction best;
    best.v = -speed;
    double best_clear = -1e18;
    for (const double w : ws) {
        Point2 x = state.robot_pos;
        double th = state.robot_heading;
        for (int s = 1; s <= steps; ++s) {
            th += w * dt;
            x += geom::heading_vec(th) * (-speed * dt);
        }
        double clear = 1e18;
        for (const auto& a : state.agents) {
            const Point2 ap = a.pos + a.vel * (steps * dt);
            clear = std::min(clear, x.dist(ap) - state.robot_radius - a.radius);
        }
        if (clear > best_clear) {
            best_clear = clear;
            best.w = w;
        }
    }
    return best;
}

}  // namespace

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::Surfing: return "Surfing";
        case Mode::CurbFollowing: return "CurbFollowing";
        case Mode::Complete: return "Complete";
        case Mode::Blocked: return "Blocked";
    }
    return "?";
}

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Complete: return "Complete";
        case Outcome::Timeout: return "Timeout";
        case Outcome::Blocked: return "Blocked";
    }
    return "?";
}

void check_arrival(Mission& mission, const Point2& robot_position) {
    if (mission.complete() || mission.waypoints.empty()) return;
    if (robot_position.dist(mission.active_waypoint()) < mission.goal_tolerance) {
        if (mission.current_index + 1 < static_cast<int>(mission.waypoints.size())) {
            ++mission.current_index;
        } else {
            mission.mode = Mode::Complete;
        }
    }
}

Arbitration arbitrate(const std::vector<tracking::Group>& groups,
                      const std::optional<curb::CurbEstimate>& curb_estimate,
                      const surfing::SurfContext& ctx,
                      std::optional<int> current_group,
                      double approach_radius) {
    Arbitration arb;
    const geom::Vec2 x_i = ctx.x_I();
    const geom::Vec2 travel =
        x_i.norm() > 1e-9 ? x_i.normalized() : geom::Vec2{1.0, 0.0};
    const auto decision = surfing::surf_cycle(groups, ctx, current_group);
    if (decision.selected_group) {
        arb.mode = Mode::Surfing;
        arb.subgoal = decision.subgoal;
        arb.group = decision.selected_group;
        geom::Vec2 dir = travel;
        for (const auto& g : groups) {
            if (g.id == *decision.selected_group && g.v_G.norm() > 1e-9) {
                dir = g.v_G.normalized();
            }
        }
        arb.lane = geom::Line2{*arb.subgoal, dir};
    } else if (curb_estimate) {
        arb.mode = Mode::CurbFollowing;
        if (approach_radius > 0.0 && x_i.norm() <= approach_radius) {
            arb.subgoal = ctx.x_W;
            arb.lane = geom::Line2{ctx.x_W, travel};
        } else {
            arb.subgoal = curb_estimate->subgoal;
            arb.lane =
                geom::Line2{*arb.subgoal, curb_estimate->curb_line.direction};
        }
    } else {
        arb.mode = Mode::Blocked;
    }
    return arb;
}

EpisodeResult run_episode(world::World& world, Mission mission,
                          const MissionConfig& config) {
    EpisodeResult result;
    tracking::Tracker tracker(config.tracker);
    std::optional<int> current_group;

    const double dt = world.params().dt;
    const int steps_per_cycle =
        std::max(1, static_cast<int>(std::round(config.episode.control_period / dt)));

    avoidance::AvoidanceParams avoid = config.avoid;
    avoid.v_max = world.robot().v_max;  // the robot, not the config, is authoritative

    while (true) {
        const auto& robot = world.robot();
        const double t = world.time();
        const auto frame = world.sense();

        std::vector<Point2> det_positions;
        det_positions.reserve(frame.detections.size());
        for (const auto& d : frame.detections) det_positions.push_back(d.position);
        tracker.update(det_positions, frame.timestamp);

        check_arrival(mission, robot.pos);

        CycleLog cycle;
        cycle.t = t;
        cycle.pos = robot.pos;
        cycle.heading = robot.heading;

        std::vector<std::pair<int, Point2>> truth;
        for (const auto& p : world.pedestrians()) {
            if (p.active) truth.emplace_back(p.id, p.pos);
        }

        if (mission.complete()) {
            cycle.mode = Mode::Complete;
            result.log.push_back(cycle);
            result.ped_truth.push_back(std::move(truth));
            result.outcome = Outcome::Complete;
            break;
        }
        if (t >= config.episode.max_time) {
            result.outcome =
                mission.mode == Mode::Blocked ? Outcome::Blocked : Outcome::Timeout;
            break;
        }

        surfing::SurfContext ctx;
        ctx.x_R = robot.pos;
        ctx.x_W = mission.active_waypoint();
        ctx.v_max = robot.v_max;
        ctx.eps_switch = config.episode.eps_switch;

        const std::vector<tracking::Group> groups =
            config.episode.allow_surfing ? tracker.groups(robot.pos)
                                         : std::vector<tracking::Group>{};

        // The curb pipeline is expensive; only consult it when no group is
        // worth surfing.
        std::optional<curb::CurbEstimate> est;
        const bool will_surf =
            surfing::surf_cycle(groups, ctx, current_group).selected_group.has_value();
        if (!will_surf && config.episode.allow_curb) {
            try {
                const auto S =
                    curb::height_filter(frame.cloud, config.curb.eps_height);
                est = curb::estimate_curb(S, {robot.pos, robot.heading},
                                          mission.active_waypoint(), config.curb);
            } catch (const curb::NoCurb&) {
                est.reset();
            }
        }

        const Arbitration arb =
            arbitrate(groups, est, ctx, current_group, config.curb.d_look);
        mission.mode = arb.mode;
        current_group = arb.group;
        cycle.mode = arb.mode;
        cycle.subgoal = arb.subgoal;
        cycle.group = arb.group;

        if (arb.subgoal) {
            avoidance::NavState nav;
            nav.robot_pos = robot.pos;
            nav.robot_heading = robot.heading;
            nav.robot_vel = robot.velocity();
            nav.robot_radius = robot.radius;
            nav.subgoal = *arb.subgoal;
            nav.lane = arb.lane;
            for (const auto& tr : tracker.tracks()) {
                nav.agents.push_back(
                    {tr.position, tr.velocity, config.episode.ped_radius});
            }

            // Street and structure returns within street_scan_range already
            // fence the drivable area with real evidence.  Sampling the
            // fitted curb line as obstacles instead would wall off corners,
            // where the fit cuts diagonally across the walkable area.
            std::vector<Point2> scan;
            const double c = std::cos(robot.heading);
            const double s = std::sin(robot.heading);
            for (const auto& pt : frame.cloud) {
                const bool tall = pt.z > config.episode.scan_min_z;
                const bool street =
                    pt.z < config.episode.street_scan_z &&
                    std::hypot(pt.x, pt.y) <= config.episode.street_scan_range;
                if (!tall && !street) continue;
                scan.push_back({robot.pos.x + pt.x * c - pt.y * s,
                                robot.pos.y + pt.x * s + pt.y * c});
            }
            avoidance::inject_statics(nav, {}, scan, avoid);

            const auto action = avoidance::policy(nav, avoid);
            if (action.blocked) {
                const auto esc =
                    escape_action(nav, avoid, config.episode.recovery_speed,
                                  config.episode.recovery_speed_max);
                world.set_robot_command(esc.v, esc.w);
            } else {
                world.set_robot_command(action.v, action.w);
            }
        } else {
            world.set_robot_command(0.0, 0.0);
        }

        result.log.push_back(cycle);
        result.ped_truth.push_back(std::move(truth));
        for (int k = 0; k < steps_per_cycle; ++k) world.step();
    }

    result.duration = world.time();
    result.min_clearance = world.min_clearance();
    result.curb_crossings = world.curb_crossings();
    return result;
}

}  // namespace sidewalk::mission
