#include "doctest.h"

#include <optional>
#include <vector>

#include "sidewalk/rng.hpp"
#include "sidewalk/surfing.hpp"

using namespace sidewalk;
using namespace sidewalk::surfing;
using geom::Point2;
using geom::Vec2;

namespace {

tracking::Group make_group(int id, Vec2 v, Point2 closest = {1, 0}) {
    tracking::Group g;
    g.id = id;
    g.member_tracks = {id};
    g.v_G = v;
    g.p_closest = closest;
    return g;
}

SurfContext ctx_toward(Point2 waypoint, double v_max = 0.8) {
    SurfContext c;
    c.x_R = {0, 0};
    c.x_W = waypoint;
    c.v_max = v_max;
    return c;
}

// Straight reimplementation of the selection predicates, used as the oracle
// for the property test below.
std::optional<int> brute_force_choice(const std::vector<tracking::Group>& groups,
                                      const SurfContext& ctx) {
    std::optional<int> best;
    double best_speed = -1.0;
    for (const auto& g : groups) {
        if (g.v_G.dot(ctx.x_I()) <= 0.0) continue;
        const double s = g.v_G.norm();
        if (s > ctx.v_max) continue;
        if (s > best_speed || (s == best_speed && best && g.id < *best)) {
            best = g.id;
            best_speed = s;
        }
    }
    return best;
}

}  // namespace

TEST_SUITE("surfing") {

TEST_CASE("filter keeps exactly the groups moving toward the waypoint") {
    const auto ctx = ctx_toward({10, 0});
    const std::vector<tracking::Group> groups = {
        make_group(0, {1, 0}),     // dot = 10, kept
        make_group(1, {-1, 0.2}),  // dot = -10, dropped
        make_group(2, {0, 1}),     // dot = 0, dropped (non-positive)
    };
    const auto kept = filter_candidates(groups, ctx);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].id == 0);
}

TEST_CASE("selection prefers the fastest group the robot can follow") {
    const auto ctx = ctx_toward({10, 0});
    SUBCASE("faster of two compliant groups wins") {
        const auto d = select_group(
            {make_group(0, {0.5, 0}), make_group(1, {0.7, 0}, {2, 1})}, ctx);
        CHECK(d.selected_group == 1);
        CHECK(d.subgoal == Point2{2, 1});
    }
    SUBCASE("group faster than v_max is not followable") {
        const auto d = select_group({make_group(0, {0.9, 0})}, ctx);
        CHECK(!d.selected_group);
        CHECK(!d.subgoal);
    }
    SUBCASE("speed exactly v_max is still eligible") {
        const auto d = select_group({make_group(0, {0.8, 0})}, ctx);
        CHECK(d.selected_group == 0);
    }
    SUBCASE("lone slow candidate is followed") {
        const auto d = select_group({make_group(3, {0.3, 0}, {4, 0})}, ctx);
        CHECK(d.selected_group == 3);
        CHECK(d.subgoal == Point2{4, 0});
    }
    SUBCASE("speed ties go to the lower group id") {
        const auto d = select_group(
            {make_group(7, {0.6, 0}), make_group(2, {0.0, 0.6})}, ctx);
        CHECK(d.selected_group == 2);
    }
}

TEST_CASE("switching to a faster group as it appears") {
    const auto ctx = ctx_toward({20, 0});
    std::vector<tracking::Group> groups = {make_group(0, {0.5, 0})};
    auto d = surf_cycle(groups, ctx);
    CHECK(d.selected_group == 0);
    groups.push_back(make_group(1, {0.7, 0}, {3, 0}));
    d = surf_cycle(groups, ctx, d.selected_group);
    CHECK(d.selected_group == 1);
}

TEST_CASE("a group that reverses is filtered out the next cycle") {
    const auto ctx = ctx_toward({20, 0});
    std::vector<tracking::Group> groups = {make_group(0, {0.7, 0}),
                                           make_group(1, {0.4, 0})};
    auto d = surf_cycle(groups, ctx);
    CHECK(d.selected_group == 0);
    groups[0].v_G = {-0.7, 0};
    d = surf_cycle(groups, ctx, d.selected_group);
    CHECK(d.selected_group == 1);
}

TEST_CASE("empty input yields an empty decision") {
    const auto d = surf_cycle({}, ctx_toward({5, 5}));
    CHECK(!d.selected_group);
    CHECK(!d.subgoal);
}

TEST_CASE("eps_switch keeps the incumbent against marginal challengers") {
    auto ctx = ctx_toward({20, 0});
    ctx.eps_switch = 0.1;
    const std::vector<tracking::Group> groups = {make_group(0, {0.65, 0}),
                                                 make_group(1, {0.7, 0})};
    CHECK(surf_cycle(groups, ctx, 0).selected_group == 0);   // within margin
    CHECK(surf_cycle(groups, ctx).selected_group == 1);      // no incumbent
    ctx.eps_switch = 0.0;
    CHECK(surf_cycle(groups, ctx, 0).selected_group == 1);   // pure argmax
}

TEST_CASE("random instances match the brute-force predicates") {
    Rng rng(55);
    for (int trial = 0; trial < 1000; ++trial) {
        SurfContext ctx;
        ctx.x_R = {rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
        ctx.x_W = {rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
        ctx.v_max = rng.uniform(0.1, 1.5);
        const int n = rng.uniform_int(0, 8);
        std::vector<tracking::Group> groups;
        for (int i = 0; i < n; ++i) {
            groups.push_back(make_group(
                i, {rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2)},
                {rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)}));
        }
        const auto d = surf_cycle(groups, ctx);
        const auto want = brute_force_choice(groups, ctx);
        REQUIRE(d.selected_group == want);
        if (d.selected_group) {
            CHECK(d.subgoal == groups[*d.selected_group].p_closest);
            CHECK(groups[*d.selected_group].v_G.norm() <= ctx.v_max);
            CHECK(groups[*d.selected_group].v_G.dot(ctx.x_I()) > 0.0);
        }

        // Scaling speeds and v_max together must not change the winner.
        const double scale = rng.uniform(0.2, 3.0);
        auto scaled = groups;
        for (auto& g : scaled) g.v_G = g.v_G * scale;
        SurfContext sctx = ctx;
        sctx.v_max = ctx.v_max * scale;
        CHECK(surf_cycle(scaled, sctx).selected_group == d.selected_group);
    }
}

}  // TEST_SUITE
