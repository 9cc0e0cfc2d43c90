#include "sidewalk/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <stdexcept>

#include "json.hpp"

#include "sidewalk/rng.hpp"

namespace sidewalk::scenario {

namespace {

using nlohmann::json;

struct ParamSlot {
    std::function<double(const Scenario&)> get;
    std::function<void(Scenario&, double)> set;
};

std::map<std::string, ParamSlot> param_table() {
    std::map<std::string, ParamSlot> t;
    auto dbl = [&](const std::string& name, auto member) {
        t[name] = {[member](const Scenario& s) { return std::invoke(member, s); },
                   [member](Scenario& s, double v) { std::invoke(member, s) = v; }};
    };
    auto integer = [&](const std::string& name, auto member) {
        t[name] = {
            [member](const Scenario& s) {
                return static_cast<double>(std::invoke(member, s));
            },
            [member](Scenario& s, double v) {
                std::invoke(member, s) = static_cast<int>(std::llround(v));
            }};
    };
    auto boolean = [&](const std::string& name, auto member) {
        t[name] = {
            [member](const Scenario& s) {
                return std::invoke(member, s) ? 1.0 : 0.0;
            },
            [member](Scenario& s, double v) { std::invoke(member, s) = v != 0.0; }};
    };

    dbl("world.dt", [](auto& s) -> auto& { return s.params.world.dt; });
    dbl("world.tau", [](auto& s) -> auto& { return s.params.world.tau; });
    dbl("world.a_ped", [](auto& s) -> auto& { return s.params.world.a_ped; });
    dbl("world.b_ped", [](auto& s) -> auto& { return s.params.world.b_ped; });
    dbl("world.a_obs", [](auto& s) -> auto& { return s.params.world.a_obs; });
    dbl("world.b_obs", [](auto& s) -> auto& { return s.params.world.b_obs; });
    dbl("world.a_max", [](auto& s) -> auto& { return s.params.world.a_max; });
    dbl("world.speed_cap", [](auto& s) -> auto& { return s.params.world.speed_cap; });
    dbl("world.route_tol", [](auto& s) -> auto& { return s.params.world.route_tol; });
    dbl("world.det_range", [](auto& s) -> auto& { return s.params.world.det_range; });
    dbl("world.det_fov_deg",
        [](auto& s) -> auto& { return s.params.world.det_fov_deg; });
    dbl("world.det_noise", [](auto& s) -> auto& { return s.params.world.det_noise; });
    dbl("world.lidar_range",
        [](auto& s) -> auto& { return s.params.world.lidar_range; });
    dbl("world.lidar_az_step_deg",
        [](auto& s) -> auto& { return s.params.world.lidar_az_step_deg; });
    dbl("world.lidar_range_step",
        [](auto& s) -> auto& { return s.params.world.lidar_range_step; });

    dbl("tracker.r_gate", [](auto& s) -> auto& { return s.params.tracker.r_gate; });
    dbl("tracker.t_stale", [](auto& s) -> auto& { return s.params.tracker.t_stale; });
    dbl("tracker.smoothing",
        [](auto& s) -> auto& { return s.params.tracker.smoothing; });
    dbl("tracker.d_group", [](auto& s) -> auto& { return s.params.tracker.d_group; });
    dbl("tracker.dv_group",
        [](auto& s) -> auto& { return s.params.tracker.dv_group; });
    dbl("tracker.dtheta_group_deg",
        [](auto& s) -> auto& { return s.params.tracker.dtheta_group_deg; });
    dbl("tracker.min_heading_speed",
        [](auto& s) -> auto& { return s.params.tracker.min_heading_speed; });

    dbl("curb.eps_height", [](auto& s) -> auto& { return s.params.curb.eps_height; });
    dbl("curb.ransac_threshold",
        [](auto& s) -> auto& { return s.params.curb.ransac_threshold; });
    integer("curb.ransac_iterations",
            [](auto& s) -> auto& { return s.params.curb.ransac_iterations; });
    dbl("curb.alpha", [](auto& s) -> auto& { return s.params.curb.alpha; });
    integer("curb.k_curb", [](auto& s) -> auto& { return s.params.curb.k_curb; });
    dbl("curb.window", [](auto& s) -> auto& { return s.params.curb.window; });
    dbl("curb.d_look", [](auto& s) -> auto& { return s.params.curb.d_look; });
    dbl("curb.d_lane", [](auto& s) -> auto& { return s.params.curb.d_lane; });
    integer("curb.min_points",
            [](auto& s) -> auto& { return s.params.curb.min_points; });
    dbl("curb.voxel", [](auto& s) -> auto& { return s.params.curb.voxel; });

    dbl("avoid.v_max", [](auto& s) -> auto& { return s.params.avoid.v_max; });
    dbl("avoid.w_max", [](auto& s) -> auto& { return s.params.avoid.w_max; });
    integer("avoid.n_v", [](auto& s) -> auto& { return s.params.avoid.n_v; });
    integer("avoid.n_w", [](auto& s) -> auto& { return s.params.avoid.n_w; });
    dbl("avoid.horizon", [](auto& s) -> auto& { return s.params.avoid.horizon; });
    dbl("avoid.horizon_dt",
        [](auto& s) -> auto& { return s.params.avoid.horizon_dt; });
    dbl("avoid.margin", [](auto& s) -> auto& { return s.params.avoid.margin; });
    dbl("avoid.margin_oncoming",
        [](auto& s) -> auto& { return s.params.avoid.margin_oncoming; });
    dbl("avoid.r_static", [](auto& s) -> auto& { return s.params.avoid.r_static; });
    dbl("avoid.delta_static",
        [](auto& s) -> auto& { return s.params.avoid.delta_static; });
    dbl("avoid.pass_offset",
        [](auto& s) -> auto& { return s.params.avoid.pass_offset; });
    dbl("avoid.w_pass", [](auto& s) -> auto& { return s.params.avoid.w_pass; });
    dbl("avoid.w_keep_right",
        [](auto& s) -> auto& { return s.params.avoid.w_keep_right; });
    dbl("avoid.w_lane", [](auto& s) -> auto& { return s.params.avoid.w_lane; });
    dbl("avoid.oncoming_speed",
        [](auto& s) -> auto& { return s.params.avoid.oncoming_speed; });

    dbl("episode.control_period",
        [](auto& s) -> auto& { return s.params.episode.control_period; });
    dbl("episode.max_time",
        [](auto& s) -> auto& { return s.params.episode.max_time; });
    dbl("episode.ped_radius",
        [](auto& s) -> auto& { return s.params.episode.ped_radius; });
    dbl("episode.scan_min_z",
        [](auto& s) -> auto& { return s.params.episode.scan_min_z; });
    dbl("episode.street_scan_z",
        [](auto& s) -> auto& { return s.params.episode.street_scan_z; });
    dbl("episode.street_scan_range",
        [](auto& s) -> auto& { return s.params.episode.street_scan_range; });
    dbl("episode.recovery_speed",
        [](auto& s) -> auto& { return s.params.episode.recovery_speed; });
    dbl("episode.recovery_speed_max",
        [](auto& s) -> auto& { return s.params.episode.recovery_speed_max; });
    dbl("episode.eps_switch",
        [](auto& s) -> auto& { return s.params.episode.eps_switch; });
    boolean("episode.allow_surfing",
            [](auto& s) -> auto& { return s.params.episode.allow_surfing; });
    boolean("episode.allow_curb",
            [](auto& s) -> auto& { return s.params.episode.allow_curb; });

    dbl("robot.radius", [](auto& s) -> auto& { return s.robot.radius; });
    dbl("robot.v_max", [](auto& s) -> auto& { return s.robot.v_max; });
    dbl("mission.goal_tolerance", [](auto& s) -> auto& { return s.goal_tolerance; });
    dbl("scenario.comparison_speed",
        [](auto& s) -> auto& { return s.comparison_speed; });
    return t;
}

Point2 to_point(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw std::runtime_error("expected [x, y] pair, got " + j.dump());
    return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Point2> to_points(const json& j) {
    std::vector<Point2> out;
    for (const auto& e : j) out.push_back(to_point(e));
    return out;
}

world::SidewalkMap parse_map(const json& j) {
    world::SidewalkMap map;
    for (const auto& poly : j.value("walkable", json::array()))
        map.walkable.push_back(to_points(poly));
    for (const auto& st : j.value("streets", json::array())) {
        world::StreetSpec s;
        s.polygon = to_points(st.at("polygon"));
        s.drop = st.value("drop", 0.1);
        map.streets.push_back(std::move(s));
    }
    for (const auto& poly : j.value("walls", json::array()))
        map.walls.push_back(to_points(poly));
    for (const auto& cb : j.value("curbs", json::array())) {
        world::CurbSpec c;
        c.polyline = to_points(cb.at("polyline"));
        c.drop = cb.value("drop", 0.1);
        map.curbs.push_back(std::move(c));
    }
    for (const auto& ob : j.value("obstacles", json::array()))
        map.obstacles.push_back({to_point(ob.at("center")), ob.at("radius")});
    return map;
}

PedSpawn parse_spawn(const json& j, int next_id) {
    PedSpawn sp;
    sp.base.id = next_id;
    sp.base.pos = to_point(j.at("pos"));
    sp.base.desired_speed = j.value("speed", 1.2);
    sp.base.radius = j.value("radius", 0.3);
    sp.base.route = to_points(j.value("route", json::array()));
    sp.base.loop = j.value("loop", false);
    sp.base.start_time = j.value("start_time", 0.0);
    sp.base.depart_time = j.value("depart_time", 1e18);
    sp.base.avoid_robot = j.value("avoid_robot", true);
    sp.count = j.value("count", 1);
    sp.spacing = j.value("spacing", 0.6);
    sp.speed_spread = j.value("speed_spread", 0.0);
    sp.pos_jitter = j.value("pos_jitter", 0.0);
    if (sp.count < 1) throw std::runtime_error("pedestrian count must be >= 1");
    return sp;
}

}  // namespace

Scenario load_scenario(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open scenario " + path);
    json j;
    try {
        j = json::parse(f, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }

    Scenario scn;
    try {
        scn.name = j.value("name", "scenario");
        scn.map = parse_map(j.at("map"));

        const auto& r = j.at("robot");
        scn.robot.pos = to_point(r.at("pos"));
        scn.robot.heading = r.value("heading", 0.0);
        scn.robot.radius = r.value("radius", 0.3);
        scn.robot.v_max = r.value("v_max", 0.8);

        scn.waypoints = to_points(j.at("waypoints"));
        if (scn.waypoints.empty())
            throw std::runtime_error("scenario needs at least one waypoint");
        scn.goal_tolerance = j.value("goal_tolerance", 0.5);
        scn.params.episode.max_time = j.value("max_time", 120.0);
        scn.comparison_speed = j.value("comparison_speed", 1.2);

        int next_id = 0;
        for (const auto& p : j.value("pedestrians", json::array())) {
            auto sp = parse_spawn(p, next_id);
            next_id += sp.count;
            scn.spawns.push_back(std::move(sp));
        }

        // Named local: chaining .items() onto the temporary from value()
        // would leave the range-for iterating freed storage.
        const json overrides = j.value("params", json::object());
        for (const auto& [key, value] : overrides.items())
            set_param(scn, key, value.get<double>());
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return scn;
}

std::vector<world::SimPedestrian> instantiate_pedestrians(const Scenario& scn,
                                                          std::uint64_t seed) {
    // Independent of the world's stream so adding noise there cannot move
    // spawn positions.
    Rng rng(seed * 0x9e3779b97f4a7c15ull + 12345);
    std::vector<world::SimPedestrian> peds;
    for (const auto& sp : scn.spawns) {
        // Formation axis follows the first route leg so a file can place a
        // group without spelling out every member.
        geom::Vec2 dir{1.0, 0.0};
        if (!sp.base.route.empty()) {
            const geom::Vec2 leg = sp.base.route.front() - sp.base.pos;
            if (leg.norm() > 1e-9) dir = leg.normalized();
        }
        const geom::Vec2 side = dir.perp();
        for (int i = 0; i < sp.count; ++i) {
            world::SimPedestrian p = sp.base;
            p.id = sp.base.id + i;
            const int row = i / 3;
            const int col = i % 3;
            const double stagger = (row % 2 == 0) ? 0.0 : 0.5;
            p.pos += side * ((col - 1 + stagger) * sp.spacing) -
                     dir * (row * sp.spacing);
            if (sp.pos_jitter > 0.0)
                p.pos += {rng.uniform(-sp.pos_jitter, sp.pos_jitter),
                          rng.uniform(-sp.pos_jitter, sp.pos_jitter)};
            if (sp.speed_spread > 0.0)
                p.desired_speed = std::clamp(
                    p.desired_speed +
                        rng.uniform(-sp.speed_spread, sp.speed_spread),
                    0.1, 2.5);
            peds.push_back(std::move(p));
        }
    }
    return peds;
}

std::vector<std::string> param_names() {
    std::vector<std::string> names;
    for (const auto& [name, slot] : param_table()) names.push_back(name);
    return names;
}

double get_param(const Scenario& scn, const std::string& key) {
    const auto table = param_table();
    const auto it = table.find(key);
    if (it == table.end()) throw std::runtime_error("unknown parameter " + key);
    return it->second.get(scn);
}

void set_param(Scenario& scn, const std::string& key, double value) {
    const auto table = param_table();
    const auto it = table.find(key);
    if (it == table.end()) throw std::runtime_error("unknown parameter " + key);
    it->second.set(scn, value);
}

void apply_override(Scenario& scn, const std::string& expr) {
    const auto eq = expr.find('=');
    if (eq == std::string::npos || eq == 0)
        throw std::runtime_error("override must look like key=value: " + expr);
    const std::string key = expr.substr(0, eq);
    const std::string value = expr.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        throw std::runtime_error("override value is not a number: " + expr);
    }
    if (used != value.size())
        throw std::runtime_error("override value is not a number: " + expr);
    set_param(scn, key, v);
}

}  // namespace sidewalk::scenario
