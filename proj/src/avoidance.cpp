#include "sidewalk/avoidance.hpp"

#include <algorithm>
#include <cmath>

namespace sidewalk::avoidance {

void inject_statics(NavState& state, const std::vector<Point2>& curb_polyline,
                    const std::vector<Point2>& scan_obstacles,
                    const AvoidanceParams& params) {
    auto add = [&](const Point2& p) {
        state.agents.push_back({p, {0.0, 0.0}, params.r_static, true});
    };
    if (curb_polyline.size() >= 2) {
        for (const auto& p : geom::resample_polyline(curb_polyline, params.delta_static)) {
            add(p);
        }
    } else if (curb_polyline.size() == 1) {
        add(curb_polyline.front());
    }

    std::vector<Point2> kept;
    for (const auto& q : scan_obstacles) {
        bool spaced = true;
        for (const auto& p : kept) {
            if (q.dist(p) < params.delta_static - 1e-9) {
                spaced = false;
                break;
            }
        }
        if (spaced) {
            kept.push_back(q);
            add(q);
        }
    }

    std::stable_sort(state.agents.begin(), state.agents.end(),
                     [&](const Agent& a, const Agent& b) {
                         return a.pos.dist_sq(state.robot_pos) <
                                b.pos.dist_sq(state.robot_pos);
                     });
}

NavAction policy(const NavState& state, const AvoidanceParams& params) {
    const int steps = std::max(1, static_cast<int>(std::round(params.horizon / params.horizon_dt)));
    const double dt = params.horizon_dt;

    Vec2 corridor = state.subgoal - state.robot_pos;
    corridor = corridor.norm() > 1e-9 ? corridor.normalized()
                                      : geom::heading_vec(state.robot_heading);

    // Agents that cannot reach the robot or the social-penalty band within
    // the horizon are dropped up front; the bound is conservative, so the
    // argmax is unchanged.
    std::vector<Agent> agents;
    for (const auto& a : state.agents) {
        const double r_safe = state.robot_radius + a.radius + params.margin +
                              params.margin_oncoming;
        const double reach = (params.v_max + a.vel.norm()) * params.horizon +
                             std::max(3.0, r_safe) + 0.5;
        if (state.robot_pos.dist(a.pos) <= reach) agents.push_back(a);
    }

    // Which agents count as oncoming (opposing the robot's heading) is a
    // property of the state, not of the candidate.
    const Vec2 hdg = geom::heading_vec(state.robot_heading);
    std::vector<char> oncoming(agents.size(), 0);
    for (std::size_t k = 0; k < agents.size(); ++k) {
        oncoming[k] = agents[k].vel.dot(hdg) < -params.oncoming_speed;
    }

    // Two veto radii per agent. Moving candidates honor the full safety
    // margin; a static return already inside it (sensor grid jitter can
    // shift one a few centimeters closer between cycles) may only demand
    // "no closer than now", less a small slide tolerance, so recovery stays
    // possible. Zero-velocity candidates are vetoed only on predicted
    // physical contact: the margin models responsibility for chosen motion,
    // and standing ground while others flow past must stay available —
    // otherwise the policy reports blocked and blind-reverses into space
    // the forward-facing detector cannot clear.
    std::vector<double> r_veto(agents.size());
    std::vector<double> r_contact(agents.size());
    for (std::size_t k = 0; k < agents.size(); ++k) {
        const double r_safe = state.robot_radius + agents[k].radius +
                              params.margin +
                              (oncoming[k] ? params.margin_oncoming : 0.0);
        const double contact = state.robot_radius + agents[k].radius;
        const double now_d = state.robot_pos.dist(agents[k].pos);
        r_contact[k] = contact;
        r_veto[k] = !agents[k].is_static || now_d >= r_safe
                        ? r_safe
                        : std::max(std::min(r_safe, now_d - 0.05), contact);
    }

    NavAction best{0.0, 0.0, true};
    double best_score = -1e18;

    for (int i = 0; i < params.n_v; ++i) {
        const double v = params.n_v > 1 ? params.v_max * i / (params.n_v - 1) : params.v_max;
        for (int j = 0; j < params.n_w; ++j) {
            const double w =
                params.n_w > 1 ? params.w_max * (2.0 * j / (params.n_w - 1) - 1.0) : 0.0;

            Point2 x = state.robot_pos;
            double th = state.robot_heading;
            bool collided = false;
            std::vector<double> min_d(agents.size(), 1e18);
            std::vector<double> side_at_min(agents.size(), 0.0);

            for (int s = 1; s <= steps && !collided; ++s) {
                th += w * dt;
                x += geom::heading_vec(th) * (v * dt);
                const double t = s * dt;
                for (std::size_t k = 0; k < agents.size(); ++k) {
                    const Agent& a = agents[k];
                    const Point2 ap = a.pos + a.vel * t;
                    const double d = x.dist(ap);
                    if (d < (v == 0.0 ? r_contact[k] : r_veto[k])) {
                        collided = true;
                        break;
                    }
                    if (d < min_d[k]) {
                        min_d[k] = d;
                        side_at_min[k] = geom::heading_vec(th).cross(ap - x);
                    }
                }
            }
            if (collided) continue;

            double score = -x.dist(state.subgoal);
            for (std::size_t k = 0; k < agents.size(); ++k) {
                if (!oncoming[k] || min_d[k] > 3.0) continue;
                // side > 0 puts the agent on the robot's left, which is where
                // an oncoming pedestrian belongs; short it by pass_offset or
                // worse and the candidate pays for it.
                score -= params.w_pass *
                         std::max(0.0, params.pass_offset - side_at_min[k]);
            }
            const double lateral = corridor.cross(x - state.robot_pos);
            score -= params.w_keep_right * std::max(0.0, lateral);
            const double lane_off =
                state.lane ? state.lane->direction.cross(x - state.lane->point)
                           : lateral;
            score -= params.w_lane * std::abs(lane_off);

            if (score > best_score) {
                best_score = score;
                best = {v, w, false};
            }
        }
    }
    return best;
}

}  // namespace sidewalk::avoidance
