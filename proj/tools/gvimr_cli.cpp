#include "gvimr/harness/experiment.hpp"
#include "gvimr/harness/report.hpp"
#include "gvimr/harness/sweep.hpp"
#include "gvimr/harness/verify.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
    using namespace gvimr::harness;

    CLI::App app{"General viscosity implicit midpoint rule solver"};
    app.require_subcommand(1);

    std::string run_config;
    auto* run = app.add_subcommand("run", "Run one experiment; writes a CSV trace and a JSON report");
    run->add_option("config", run_config, "experiment config (JSON)")->required();

    std::size_t trials = 100;
    std::uint64_t seed = 0;
    std::string verify_report;
    auto* verify = app.add_subcommand("verify", "Randomized self-check of the inequalities the solver relies on");
    verify->add_option("--trials", trials, "random instances per check")->check(CLI::PositiveNumber);
    verify->add_option("--seed", seed, "sampler seed");
    verify->add_option("--report", verify_report, "also write the report to this file");

    std::string sweep_config;
    unsigned threads = 0;
    auto* sw = app.add_subcommand("sweep", "Evaluate a parameter grid; writes a CSV summary");
    sw->add_option("config", sweep_config, "sweep config (JSON with a 'grid' object)")->required();
    sw->add_option("--threads", threads, "worker threads (0 = hardware concurrency)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfigError;
    }

    if (*run) return run_experiment(run_config, std::cerr);

    if (*verify) {
        const auto report = verify_lemmas(seed, trials);
        const auto text = to_text(report);
        std::cout << text;
        if (!verify_report.empty()) {
            try {
                write_report(report, resolve_output_path(verify_report));
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << '\n';
                return kExitConfigError;
            }
        }
        return report.all_pass() ? 0 : kExitNotConverged;
    }

    return sweep(sweep_config, std::cout, threads);
}
