#include <cstdio>
#include <exception>

#include "CLI11.hpp"

#include "sidewalk/runner.hpp"
#include "sidewalk/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Sidewalk navigation batch runner: robot episodes, scripted "
                 "pedestrian episodes, shortest path, and path-similarity "
                 "metrics"};

    sidewalk::runner::RunConfig cfg;
    bool list_params = false;
    app.add_option("scenario", cfg.scenario_path, "Scenario JSON file")
        ->check(CLI::ExistingFile);
    app.add_option("--trials", cfg.trials, "Episodes per side (default 10)")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "Base seed; trial i runs on seed+i");
    app.add_option("--out", cfg.out_dir, "Output directory (default ./out)");
    app.add_option("--mode", cfg.mode, "auto | surf | curb")
        ->check(CLI::IsMember({"auto", "surf", "curb"}));
    app.add_option("--override", cfg.overrides,
                   "Parameter override key=value (repeatable); see "
                   "--list-params");
    app.add_flag("--list-params", list_params,
                 "Print every overridable parameter name and exit");

    CLI11_PARSE(app, argc, argv);

    if (list_params) {
        for (const auto& name : sidewalk::scenario::param_names())
            std::printf("%s\n", name.c_str());
        return 0;
    }
    if (cfg.scenario_path.empty()) {
        std::fprintf(stderr, "error: a scenario file is required\n");
        return 2;
    }

    try {
        return sidewalk::runner::run(cfg);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
