#include <iostream>

#include <CLI11.hpp>

#include "demos.hpp"
#include "pipeline.hpp"

using namespace agmon::cli;

int main(int argc, char** argv) {
    CLI::App app{"agmon: essential spectra, Fredholm checks and eigenfunction decay for elliptic systems"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    unsigned threads = 1;
    auto* run = app.add_subcommand("run", "Run a scenario pipeline and write its result files");
    run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    run->add_option("--out", out_dir, "Output directory")->required();
    auto* seed_opt = run->add_option("--seed", seed, "Override the scenario seed");
    auto* threads_opt = run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

    auto* validate = app.add_subcommand("validate", "Parse and validate a scenario");
    validate->add_option("scenario", scenario_path, "Scenario JSON file")->required();

    std::string demo_name;
    auto* demo = app.add_subcommand("demo", "Print a built-in scenario");
    demo->add_option("name", demo_name, "Demo name")->required()->check(CLI::IsMember(demo_names()));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*demo) {
            std::cout << demo_scenario(demo_name);
            return kExitOk;
        }
        const Scenario s = load_scenario(scenario_path);
        if (*validate) {
            std::cout << scenario_path << ": ok\n";
            return kExitOk;
        }
        RunOptions opt;
        opt.out_dir = out_dir;
        if (*seed_opt) opt.seed = seed;
        if (*threads_opt) opt.threads = threads;
        return run_scenario(s, opt, std::cout);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return kExitError;
}
