#include "sidewalk/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "sidewalk/eval.hpp"
#include "sidewalk/trace.hpp"

namespace sidewalk::runner {

using geom::Point2;

namespace {

std::string fmt(double v, const char* spec = "%.6f") {
    char buf[40];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

mission::Mission make_mission(const scenario::Scenario& scn) {
    mission::Mission m;
    m.waypoints = scn.waypoints;
    m.goal_tolerance = scn.goal_tolerance;
    return m;
}

}  // namespace

std::vector<Point2> plan_shortest_path(const scenario::Scenario& scn) {
    if (scn.waypoints.empty()) throw world::NoPath("scenario has no waypoints");
    // The geometric reference path ignores intermediate waypoints: it is the
    // shortest walkable route from the start to the final destination.
    return world::shortest_path(scn.map, scn.robot.pos, scn.waypoints.back(),
                                scn.robot.radius);
}

mission::MissionConfig mission_config(const scenario::Scenario& scn,
                                      const std::string& mode) {
    mission::MissionConfig cfg;
    cfg.episode = scn.params.episode;
    cfg.tracker = scn.params.tracker;
    cfg.curb = scn.params.curb;
    cfg.avoid = scn.params.avoid;
    if (mode == "surf") cfg.episode.allow_curb = false;
    else if (mode == "curb") cfg.episode.allow_surfing = false;
    else if (mode != "auto")
        throw std::runtime_error("mode must be auto, surf, or curb: " + mode);
    return cfg;
}

mission::EpisodeResult run_robot_trial(const scenario::Scenario& scn,
                                       const std::string& mode,
                                       std::uint64_t seed) {
    world::World w(scn.map, scn.robot,
                   scenario::instantiate_pedestrians(scn, seed),
                   scn.params.world, seed);
    return mission::run_episode(w, make_mission(scn), mission_config(scn, mode));
}

std::vector<std::pair<double, Point2>> run_pedestrian_trial(
    const scenario::Scenario& scn, std::uint64_t seed) {
    auto peds = scenario::instantiate_pedestrians(scn, seed);
    world::SimPedestrian walker;
    walker.id = 100000;  // above any expanded id
    walker.pos = scn.robot.pos;
    walker.desired_speed = scn.comparison_speed;
    walker.route = scn.waypoints;
    peds.push_back(walker);

    // Park the robot far outside the scene so it cannot influence anyone.
    world::RobotState parked = scn.robot;
    parked.pos = {1e6, 1e6};
    world::World w(scn.map, parked, std::move(peds), scn.params.world, seed);

    const int steps_per_cycle = std::max(
        1, static_cast<int>(std::round(scn.params.episode.control_period /
                                       scn.params.world.dt)));
    const Point2 goal = scn.waypoints.back();

    auto walker_pos = [&]() {
        for (const auto& p : w.pedestrians())
            if (p.id == walker.id) return p.pos;
        throw std::logic_error("comparison pedestrian vanished");
    };

    std::vector<std::pair<double, Point2>> path;
    while (true) {
        const double t = w.time();
        const Point2 pos = walker_pos();
        path.emplace_back(t, pos);
        if (pos.dist(goal) < scn.goal_tolerance) break;
        if (t >= scn.params.episode.max_time) break;
        for (int k = 0; k < steps_per_cycle; ++k) w.step();
    }
    return path;
}

namespace {

void write_metrics(const std::string& dir, const eval::TrialComparison& cmp,
                   std::size_t n_p, std::size_t n_r) {
    std::string report = "pair,metric,n,mean,sd,welch_p\n";
    auto row = [&](const char* pair, const char* metric,
                   const eval::MetricSummary& m, double p) {
        report += std::string(pair) + ',' + metric + ',' +
                  std::to_string(m.values.size()) + ',' + fmt(m.stats.mean) +
                  ',' + fmt(m.stats.sd) + ',' + fmt(p, "%.9g") + '\n';
    };
    row("P-R", "h_average", cmp.pr_average, cmp.p_average);
    row("P-S", "h_average", cmp.ps_average, cmp.p_average);
    row("P-R", "h_directional", cmp.pr_directional, cmp.p_directional);
    row("P-S", "h_directional", cmp.ps_directional, cmp.p_directional);
    trace::write_file(dir + "/metrics_report.csv", report);

    std::string txt = "Path-similarity metrics (meters); source set is each "
                      "pedestrian trial\n\n";
    char line[160];
    std::snprintf(line, sizeof(line), "%-6s %-15s %6s %10s %10s\n", "pair",
                  "metric", "n", "mean", "sd");
    txt += line;
    auto txt_row = [&](const char* pair, const char* metric,
                       const eval::MetricSummary& m) {
        std::snprintf(line, sizeof(line), "%-6s %-15s %6zu %10.4f %10.4f\n",
                      pair, metric, m.values.size(), m.stats.mean, m.stats.sd);
        txt += line;
    };
    txt_row("P-R", "h_average", cmp.pr_average);
    txt_row("P-S", "h_average", cmp.ps_average);
    txt_row("P-R", "h_directional", cmp.pr_directional);
    txt_row("P-S", "h_directional", cmp.ps_directional);
    txt += "\nWelch two-sided p (P-R vs P-S): h_average=" +
           fmt(cmp.p_average, "%.9g") +
           ", h_directional=" + fmt(cmp.p_directional, "%.9g") + "\n";
    trace::write_file(dir + "/metrics_report.txt", txt);

    std::string box = "pair,metric,whisker_lo,q1,median,q3,whisker_hi\n";
    auto box_row = [&](const char* pair, const char* metric,
                       const eval::BoxStats& b) {
        box += std::string(pair) + ',' + metric + ',' + fmt(b.lo) + ',' +
               fmt(b.q1) + ',' + fmt(b.median) + ',' + fmt(b.q3) + ',' +
               fmt(b.hi) + '\n';
    };
    box_row("P-R", "h_average", cmp.pr_average.box);
    box_row("P-S", "h_average", cmp.ps_average.box);
    box_row("P-R", "h_directional", cmp.pr_directional.box);
    box_row("P-S", "h_directional", cmp.ps_directional.box);
    trace::write_file(dir + "/boxplot.csv", box);

    std::string pairs = "pair,metric,p_trial,other_trial,value\n";
    for (std::size_t i = 0; i < n_p; ++i) {
        for (std::size_t j = 0; j < n_r; ++j) {
            const std::size_t k = i * n_r + j;
            pairs += "P-R,h_average," + std::to_string(i) + ',' +
                     std::to_string(j) + ',' + fmt(cmp.pr_average.values[k]) +
                     '\n';
            pairs += "P-R,h_directional," + std::to_string(i) + ',' +
                     std::to_string(j) + ',' +
                     fmt(cmp.pr_directional.values[k]) + '\n';
        }
        pairs += "P-S,h_average," + std::to_string(i) + ",s," +
                 fmt(cmp.ps_average.values[i]) + '\n';
        pairs += "P-S,h_directional," + std::to_string(i) + ",s," +
                 fmt(cmp.ps_directional.values[i]) + '\n';
    }
    trace::write_file(dir + "/pairwise_values.csv", pairs);
}

}  // namespace

int run(const RunConfig& config) {
    if (config.trials < 1) throw std::runtime_error("trials must be >= 1");
    auto scn = scenario::load_scenario(config.scenario_path);
    for (const auto& ov : config.overrides) scenario::apply_override(scn, ov);
    mission_config(scn, config.mode);  // validate the mode early

    std::filesystem::create_directories(config.out_dir);
    const std::string dir = config.out_dir;

    std::vector<Point2> s_path;
    try {
        s_path = plan_shortest_path(scn);
    } catch (const world::NoPath& e) {
        std::fprintf(stderr, "%s: no shortest path: %s\n", scn.name.c_str(),
                     e.what());
        return 2;
    }
    {
        std::vector<std::pair<double, Point2>> timed;
        double len = 0.0;
        for (std::size_t i = 0; i < s_path.size(); ++i) {
            if (i > 0) len += s_path[i].dist(s_path[i - 1]);
            timed.emplace_back(len / scn.robot.v_max, s_path[i]);
        }
        trace::write_file(dir + "/s_path.csv", trace::path_csv(timed));
    }

    std::string summary =
        "label,trial,seed,outcome,duration_s,cycles,min_clearance_m,collided,"
        "curb_crossings,final_x,final_y\n";
    bool all_complete = true;

    std::vector<std::vector<Point2>> r_positions;
    for (int i = 0; i < config.trials; ++i) {
        const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(i);
        const auto res = run_robot_trial(scn, config.mode, seed);
        trace::write_file(dir + "/r_path_" + std::to_string(i) + ".csv",
                          trace::episode_csv(res.log));

        std::vector<Point2> pos;
        pos.reserve(res.log.size());
        for (const auto& c : res.log) pos.push_back(c.pos);
        r_positions.push_back(std::move(pos));

        const bool touched =
            res.min_clearance <= 0.0 && res.min_clearance < 1e17;
        all_complete &= res.outcome == mission::Outcome::Complete;
        const Point2 last = res.log.empty() ? scn.robot.pos : res.log.back().pos;
        summary += "r," + std::to_string(i) + ',' + std::to_string(seed) + ',' +
                   mission::outcome_name(res.outcome) + ',' +
                   fmt(res.duration) + ',' + std::to_string(res.log.size()) +
                   ',' + (res.min_clearance > 1e17 ? std::string("")
                                                   : fmt(res.min_clearance)) +
                   ',' + (touched ? "1" : "0") + ',' +
                   std::to_string(res.curb_crossings) + ',' + fmt(last.x) +
                   ',' + fmt(last.y) + '\n';
    }

    std::vector<std::vector<Point2>> p_positions;
    for (int i = 0; i < config.trials; ++i) {
        const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(i);
        const auto path = run_pedestrian_trial(scn, seed);
        trace::write_file(dir + "/p_path_" + std::to_string(i) + ".csv",
                          trace::path_csv(path));

        std::vector<Point2> pos;
        pos.reserve(path.size());
        for (const auto& [t, p] : path) pos.push_back(p);

        const bool arrived =
            !pos.empty() && pos.back().dist(scn.waypoints.back()) <
                                scn.goal_tolerance;
        summary += "p," + std::to_string(i) + ',' + std::to_string(seed) + ',' +
                   (arrived ? "Complete" : "Timeout") + ',' +
                   fmt(path.empty() ? 0.0 : path.back().first) + ',' +
                   std::to_string(path.size()) + ",,,," +
                   fmt(pos.empty() ? 0.0 : pos.back().x) + ',' +
                   fmt(pos.empty() ? 0.0 : pos.back().y) + '\n';
        p_positions.push_back(std::move(pos));
    }
    trace::write_file(dir + "/summary.csv", summary);

    if (config.trials >= 2) {
        const auto cmp = eval::compare_trials(p_positions, r_positions, s_path);
        write_metrics(dir, cmp, p_positions.size(), r_positions.size());
    }

    std::string meta;
    meta += "scenario_name " + scn.name + '\n';
    meta += "scenario_path " + config.scenario_path + '\n';
    meta += "trials " + std::to_string(config.trials) + '\n';
    meta += "seed " + std::to_string(config.seed) + '\n';
    meta += "mode " + config.mode + '\n';
    for (const auto& ov : config.overrides) meta += "override " + ov + '\n';
    for (const auto& name : scenario::param_names())
        meta += name + ' ' + fmt(scenario::get_param(scn, name), "%.9g") + '\n';
    meta += "goal_tolerance " + fmt(scn.goal_tolerance, "%.9g") + '\n';
    meta += "robot_start " + fmt(scn.robot.pos.x) + ' ' + fmt(scn.robot.pos.y) +
            '\n';
    trace::write_file(dir + "/run_config.txt", meta);

    return all_complete ? 0 : 1;
}

}  // namespace sidewalk::runner
