#include "sidewalk/surfing.hpp"

namespace sidewalk::surfing {

std::vector<tracking::Group> filter_candidates(
    const std::vector<tracking::Group>& groups, const SurfContext& ctx) {
    const Vec2 x_I = ctx.x_I();
    std::vector<tracking::Group> kept;
    for (const auto& g : groups) {
        if (g.v_G.dot(x_I) > 0.0) kept.push_back(g);
    }
    return kept;
}

SurfDecision select_group(const std::vector<tracking::Group>& candidates,
                          const SurfContext& ctx, std::optional<int> current) {
    const tracking::Group* best = nullptr;
    double best_speed = -1.0;
    const tracking::Group* incumbent = nullptr;
    for (const auto& g : candidates) {
        const double speed = g.v_G.norm();
        if (speed > ctx.v_max) continue;  // cannot keep up with this group
        if (current && g.id == *current) incumbent = &g;
        if (speed > best_speed ||
            (speed == best_speed && best && g.id < best->id)) {
            best = &g;
            best_speed = speed;
        }
    }
    if (incumbent && ctx.eps_switch > 0.0 && best != incumbent &&
        best_speed <= incumbent->v_G.norm() + ctx.eps_switch) {
        best = incumbent;
    }
    SurfDecision d;
    if (best) {
        d.selected_group = best->id;
        d.subgoal = best->p_closest;
    }
    return d;
}

SurfDecision surf_cycle(const std::vector<tracking::Group>& groups,
                        const SurfContext& ctx, std::optional<int> current) {
    return select_group(filter_candidates(groups, ctx), ctx, current);
}

}  // namespace sidewalk::surfing
