#pragma once

#include <vector>

#include "sidewalk/geometry.hpp"

namespace sidewalk::tracking {

using geom::Point2;
using geom::Vec2;

struct Track {
    int id = 0;
    Point2 position;
    Vec2 velocity;  // zero until the second observation
    int age = 1;    // observations so far
    double last_seen = 0.0;
};

struct Group {
    int id = 0;  // lowest member track id
    std::vector<int> member_tracks;
    Vec2 v_G;
    Point2 p_closest;
};

struct TrackerParams {
    double r_gate = 0.8;
    double t_stale = 1.0;
    double smoothing = 0.5;  // weight of the newest finite difference
    double d_group = 1.5;
    double dv_group = 0.3;
    double dtheta_group_deg = 30.0;
    // Below this speed a track has no meaningful heading; the heading
    // coherence test is skipped for it.
    double min_heading_speed = 0.05;
};

// Partition tracks into coherent-motion groups: two tracks are linked when
// they are close, of similar speed, and (when both are moving) of similar
// heading; groups are the transitive closure of the link relation.
std::vector<Group> form_groups(const std::vector<Track>& tracks,
                               const Point2& robot_position,
                               const TrackerParams& params);

class Tracker {
public:
    explicit Tracker(TrackerParams params = {}) : params_(params) {}

    // Match detections to existing tracks by nearest-neighbour gating,
    // spawn tracks for the rest, and drop tracks unseen for too long.
    void update(const std::vector<Point2>& detections, double t);

    const std::vector<Track>& tracks() const { return tracks_; }
    std::vector<Group> groups(const Point2& robot_position) const {
        return form_groups(tracks_, robot_position, params_);
    }
    const TrackerParams& params() const { return params_; }

private:
    TrackerParams params_;
    std::vector<Track> tracks_;
    int next_id_ = 0;
};

}  // namespace sidewalk::tracking
