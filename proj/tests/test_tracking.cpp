#include "doctest.h"

#include <algorithm>
#include <vector>

#include "sidewalk/rng.hpp"
#include "sidewalk/tracking.hpp"

using namespace sidewalk;
using namespace sidewalk::tracking;
using geom::Point2;
using geom::Vec2;

namespace {

Track make_track(int id, Point2 pos, Vec2 vel) {
    Track t;
    t.id = id;
    t.position = pos;
    t.velocity = vel;
    t.age = 5;
    return t;
}

}  // namespace

TEST_SUITE("tracking") {

TEST_CASE("velocity settles on the true value at 20 Hz") {
    Tracker tracker;
    for (int frame = 0; frame <= 10; ++frame) {
        const double t = frame * 0.05;
        tracker.update({{1.0 * t, 0.0}}, t);
    }
    REQUIRE(tracker.tracks().size() == 1);
    const Vec2 v = tracker.tracks()[0].velocity;
    CHECK(std::abs(v.x - 1.0) < 0.05);
    CHECK(std::abs(v.y) < 0.05);
}

TEST_CASE("smoothing blends finite differences") {
    Tracker tracker;
    tracker.update({{0.0, 0.0}}, 0.0);
    tracker.update({{0.1, 0.0}}, 0.1);  // raw 1.0, taken as-is
    CHECK(tracker.tracks()[0].velocity.x == doctest::Approx(1.0));
    tracker.update({{0.15, 0.0}}, 0.2);  // raw 0.5, blended 50/50
    CHECK(tracker.tracks()[0].velocity.x == doctest::Approx(0.75));
}

TEST_CASE("stale tracks are dropped, fresh ones survive") {
    Tracker tracker;
    tracker.update({{2.0, 1.0}}, 0.0);
    tracker.update({}, 0.9);
    CHECK(tracker.tracks().size() == 1);
    tracker.update({}, 1.0);  // exactly T_stale: still kept
    CHECK(tracker.tracks().size() == 1);
    tracker.update({}, 1.05);
    CHECK(tracker.tracks().empty());
}

TEST_CASE("gating separates far detections and reuses near ones") {
    Tracker tracker;
    tracker.update({{0.0, 0.0}, {5.0, 0.0}}, 0.0);
    REQUIRE(tracker.tracks().size() == 2);
    const int id0 = tracker.tracks()[0].id;

    // 0.5 m jump stays in the 0.8 m gate; 5 m spawns another track.
    tracker.update({{0.5, 0.0}, {10.0, 0.0}}, 0.1);
    REQUIRE(tracker.tracks().size() == 3);
    CHECK(tracker.tracks()[0].id == id0);
    CHECK(tracker.tracks()[0].age == 2);
}

TEST_CASE("closest pair wins when two detections compete for one track") {
    Tracker tracker;
    tracker.update({{0.0, 0.0}}, 0.0);
    tracker.update({{0.3, 0.0}, {-0.4, 0.0}}, 0.1);
    REQUIRE(tracker.tracks().size() == 2);
    CHECK(tracker.tracks()[0].position == Point2{0.3, 0.0});
    CHECK(tracker.tracks()[1].position == Point2{-0.4, 0.0});
}

TEST_CASE("form_groups: coherent pair merges, opposing pair does not") {
    TrackerParams params;
    const Point2 robot{0, 0};
    std::vector<Track> pair = {make_track(0, {3.0, 0.0}, {1, 0}),
                               make_track(1, {3.0, 0.8}, {1, 0})};
    auto groups = form_groups(pair, robot, params);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].v_G == Vec2{1, 0});
    CHECK(groups[0].member_tracks == std::vector<int>{0, 1});

    pair[1].velocity = {-1, 0};
    groups = form_groups(pair, robot, params);
    CHECK(groups.size() == 2);
}

TEST_CASE("form_groups: nearest member becomes p_closest") {
    TrackerParams params;
    std::vector<Track> tracks = {make_track(0, {3.0, 0.4}, {1, 0}),
                                 make_track(1, {3.0, 0.6}, {1, 0}),
                                 make_track(2, {2.9, 0.5}, {1, 0})};
    const auto groups = form_groups(tracks, {0, 0}, params);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].id == 0);
    CHECK(groups[0].p_closest == Point2{2.9, 0.5});
}

TEST_CASE("form_groups: linkage is transitive") {
    TrackerParams params;
    std::vector<Track> chain = {make_track(0, {0.0, 0.0}, {1, 0}),
                                make_track(1, {1.2, 0.0}, {1, 0}),
                                make_track(2, {2.4, 0.0}, {1, 0})};
    CHECK(chain[0].position.dist(chain[2].position) > params.d_group);
    const auto groups = form_groups(chain, {0, 0}, params);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].member_tracks.size() == 3);
}

TEST_CASE("form_groups: slow tracks skip the heading test") {
    TrackerParams params;
    std::vector<Track> tracks = {make_track(0, {1.0, 0.0}, {0.02, 0.0}),
                                 make_track(1, {1.5, 0.0}, {0.0, -0.03})};
    const auto groups = form_groups(tracks, {0, 0}, params);
    CHECK(groups.size() == 1);  // near-stationary pair groups by distance
}

TEST_CASE("form_groups: partition invariants on random instances") {
    TrackerParams params;
    Rng rng(321);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = rng.uniform_int(0, 12);
        std::vector<Track> tracks;
        for (int i = 0; i < n; ++i) {
            tracks.push_back(make_track(
                i, {rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)},
                {rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)}));
        }
        const Point2 robot{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        const auto groups = form_groups(tracks, robot, params);

        std::vector<int> seen;
        for (const auto& g : groups) {
            REQUIRE(!g.member_tracks.empty());
            CHECK(g.id == *std::min_element(g.member_tracks.begin(),
                                            g.member_tracks.end()));
            for (int id : g.member_tracks) seen.push_back(id);
            double best = 1e18;
            for (int id : g.member_tracks) {
                best = std::min(best, tracks[id].position.dist(robot));
            }
            CHECK(g.p_closest.dist(robot) == doctest::Approx(best));
        }
        std::sort(seen.begin(), seen.end());
        REQUIRE(static_cast<int>(seen.size()) == n);
        for (int i = 0; i < n; ++i) CHECK(seen[i] == i);

        // Shuffled input produces the same partition.
        std::vector<Track> shuffled = tracks;
        std::reverse(shuffled.begin(), shuffled.end());
        const auto groups2 = form_groups(shuffled, robot, params);
        REQUIRE(groups2.size() == groups.size());
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            CHECK(groups2[gi].id == groups[gi].id);
            CHECK(groups2[gi].member_tracks == groups[gi].member_tracks);
            CHECK(groups2[gi].p_closest == groups[gi].p_closest);
        }
    }
}

}  // TEST_SUITE
