#pragma once

#include <optional>
#include <vector>

#include "sidewalk/tracking.hpp"

namespace sidewalk::surfing {

using geom::Point2;
using geom::Vec2;

struct SurfContext {
    Point2 x_R;  // robot position
    Point2 x_W;  // active waypoint
    double v_max = 0.8;
    // Minimum speed advantage a challenger needs before we drop the group we
    // are already following. Zero reproduces the plain argmax re-evaluated
    // every cycle (which may oscillate between near-equal groups).
    double eps_switch = 0.0;

    Vec2 x_I() const { return x_W - x_R; }
};

struct SurfDecision {
    std::optional<int> selected_group;
    std::optional<Point2> subgoal;  // p_closest of the selected group
};

// Keep only groups whose mean velocity has positive component toward the
// waypoint: v_G dot x_I > 0.
std::vector<tracking::Group> filter_candidates(
    const std::vector<tracking::Group>& groups, const SurfContext& ctx);

// Pick the fastest candidate not exceeding v_max (ties: lowest group id).
// `current` is the group followed last cycle, used only when eps_switch > 0.
SurfDecision select_group(const std::vector<tracking::Group>& candidates,
                          const SurfContext& ctx,
                          std::optional<int> current = std::nullopt);

SurfDecision surf_cycle(const std::vector<tracking::Group>& groups,
                        const SurfContext& ctx,
                        std::optional<int> current = std::nullopt);

}  // namespace sidewalk::surfing
