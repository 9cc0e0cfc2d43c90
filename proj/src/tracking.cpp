#include "sidewalk/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace sidewalk::tracking {

void Tracker::update(const std::vector<Point2>& detections, double t) {
    // Candidate (distance, track, detection) triples inside the gate, matched
    // greedily closest-first. The tuple order makes ties deterministic.
    std::vector<std::tuple<double, int, int>> candidates;
    for (std::size_t ti = 0; ti < tracks_.size(); ++ti) {
        for (std::size_t di = 0; di < detections.size(); ++di) {
            const double d = tracks_[ti].position.dist(detections[di]);
            if (d <= params_.r_gate) {
                candidates.emplace_back(d, tracks_[ti].id, static_cast<int>(di));
            }
        }
    }
    std::sort(candidates.begin(), candidates.end());

    std::vector<char> det_used(detections.size(), 0);
    std::vector<char> track_used(tracks_.size(), 0);
    for (const auto& [d, track_id, di] : candidates) {
        const auto it = std::find_if(tracks_.begin(), tracks_.end(),
                                     [&](const Track& tr) { return tr.id == track_id; });
        const std::size_t ti = it - tracks_.begin();
        if (track_used[ti] || det_used[di]) continue;
        track_used[ti] = det_used[di] = 1;

        Track& tr = *it;
        const double dt = t - tr.last_seen;
        if (dt > 1e-9) {
            const Vec2 raw = (detections[di] - tr.position) / dt;
            // First difference is taken at face value; later ones are blended
            // so the estimate settles quickly but still smooths jitter.
            tr.velocity = tr.age == 1
                              ? raw
                              : raw * params_.smoothing +
                                    tr.velocity * (1.0 - params_.smoothing);
        }
        tr.position = detections[di];
        tr.age += 1;
        tr.last_seen = t;
    }

    for (std::size_t di = 0; di < detections.size(); ++di) {
        if (det_used[di]) continue;
        Track tr;
        tr.id = next_id_++;
        tr.position = detections[di];
        tr.velocity = {0, 0};
        tr.age = 1;
        tr.last_seen = t;
        tracks_.push_back(tr);
    }

    std::erase_if(tracks_, [&](const Track& tr) {
        return t - tr.last_seen > params_.t_stale;
    });
}

std::vector<Group> form_groups(const std::vector<Track>& tracks,
                               const Point2& robot_position,
                               const TrackerParams& params) {
    const int n = static_cast<int>(tracks.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    const auto find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };

    const double cos_max = std::cos(params.dtheta_group_deg * M_PI / 180.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Track& a = tracks[i];
            const Track& b = tracks[j];
            if (a.position.dist(b.position) > params.d_group) continue;
            const double sa = a.velocity.norm();
            const double sb = b.velocity.norm();
            if (std::abs(sa - sb) > params.dv_group) continue;
            if (sa >= params.min_heading_speed && sb >= params.min_heading_speed) {
                if (a.velocity.dot(b.velocity) < cos_max * sa * sb) continue;
            }
            parent[find(i)] = find(j);
        }
    }

    std::vector<std::vector<int>> members(n);
    for (int i = 0; i < n; ++i) {
        members[find(i)].push_back(i);
    }

    std::vector<Group> groups;
    for (int root = 0; root < n; ++root) {
        if (members[root].empty()) continue;
        // Id order makes v_G summation and the p_closest tie-break
        // independent of the caller's track ordering.
        std::sort(members[root].begin(), members[root].end(),
                  [&](int a, int b) { return tracks[a].id < tracks[b].id; });
        Group g;
        g.id = tracks[members[root].front()].id;
        Vec2 sum{0, 0};
        double best_d = 1e18;
        for (int idx : members[root]) {
            const Track& tr = tracks[idx];
            g.member_tracks.push_back(tr.id);
            sum += tr.velocity;
            const double d = tr.position.dist(robot_position);
            if (d < best_d) {  // ties keep the lower-id member
                best_d = d;
                g.p_closest = tr.position;
            }
        }
        g.v_G = sum / static_cast<double>(members[root].size());
        groups.push_back(g);
    }
    std::sort(groups.begin(), groups.end(),
              [](const Group& a, const Group& b) { return a.id < b.id; });
    return groups;
}

}  // namespace sidewalk::tracking
