// Command-line front end: estimates the hull functionals of Brownian motion,
// their inverse processes, and the closed-form reference tables they are
// checked against.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "bmhull/harness.hpp"

namespace {

void add_common(CLI::App* cmd, bmhull::ExperimentConfig& config) {
    cmd->add_option("--seed", config.seed, "64-bit stream seed")
        ->default_val(std::uint64_t{0});
    cmd->add_option("--workers", config.workers,
                    "worker threads (0 = hardware concurrency)");
    cmd->add_option("--output", config.output, "output file (default stdout)");
    cmd->add_option("--format", config.format, "csv or json")->default_val("csv");
}

std::string resolve_output(const std::string& path) {
    if (path.empty()) return path;
    std::filesystem::path p(path);
    const char* dir = std::getenv("BMHULL_OUTPUT_DIR");
    if (dir && *dir && p.is_relative()) return (std::filesystem::path(dir) / p).string();
    return path;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo laboratory for convex hulls of Brownian motion"};
    app.require_subcommand(1);

    bmhull::ExperimentConfig config;

    auto* estimate = app.add_subcommand(
        "estimate", "Functional means E[V1], E[S1], E[D1], E[R1] at one dimension");
    estimate->add_option("--dim", config.dim, "dimension n")->default_val(2);
    estimate->add_option("--steps", config.steps, "grid steps")->default_val(10000);
    estimate->add_option("--replicates", config.replicates, "Monte Carlo replicates")
        ->default_val(10000);
    estimate->add_option("--allowance", config.allowance,
                         "discretization allowance for verdicts");
    estimate->add_flag("--heavy", config.heavy, "raise steps to 1e5");
    estimate->add_option("--dump-paths", config.dump_paths,
                         "write the replicate-0 path (one grid point per line)");
    add_common(estimate, config);

    auto* inverse = app.add_subcommand(
        "inverse", "Inverse-process means via transform and/or direct passage");
    inverse->add_option("--dim", config.dim, "dimension n")->default_val(2);
    inverse->add_option("--steps", config.steps, "grid steps per unit time")
        ->default_val(10000);
    inverse->add_option("--replicates", config.replicates, "Monte Carlo replicates")
        ->default_val(10000);
    inverse->add_option("--method", config.method, "direct, transform, or both")
        ->default_val("both");
    inverse->add_option("--level", config.level, "passage level y")->default_val(1.0);
    inverse->add_option("--allowance", config.allowance,
                        "discretization allowance for verdicts");
    inverse->add_flag("--heavy", config.heavy, "raise steps to 1e5");
    add_common(inverse, config);

    auto* bounds = app.add_subcommand("bounds", "Closed-form bound table");
    bounds->add_option("--nmax", config.nmax, "largest dimension")->default_val(5);
    add_common(bounds, config);

    auto* optimize = app.add_subcommand(
        "optimize", "Convex-program certificate table: closed form vs numeric");
    optimize->add_option("--nmax", config.nmax, "largest dimension")->default_val(5);
    add_common(optimize, config);

    auto* stage = app.add_subcommand(
        "stage", "n-stage construction replicates (per-replicate records)");
    stage->add_option("--dim", config.dim, "dimension n")->default_val(3);
    stage->add_option("--replicates", config.replicates, "replicates")
        ->default_val(1000);
    stage->add_option("--radii", config.radii, "stage radii r1,...,rN")
        ->delimiter(',');
    stage->add_option("--dt-factor", config.dt_factor,
                      "step size as a fraction of the expected stage time");
    add_common(stage, config);

    auto* report = app.add_subcommand(
        "report", "Full table for dimensions 1..N with bound verdicts");
    report->add_option("--dim", config.nmax, "largest dimension")->default_val(5);
    report->add_option("--steps", config.steps, "grid steps")->default_val(10000);
    report->add_option("--replicates", config.replicates, "Monte Carlo replicates")
        ->default_val(10000);
    report->add_option("--method", config.method, "direct, transform, or both")
        ->default_val("transform");
    report->add_option("--allowance", config.allowance,
                       "discretization allowance for verdicts");
    report->add_flag("--heavy", config.heavy, "raise steps to 1e5");
    add_common(report, config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    config.command = app.get_subcommands().front()->get_name();
    try {
        bmhull::RunResult result = bmhull::run(config);
        const std::string target = resolve_output(config.output);
        if (target.empty()) {
            std::cout << result.text;
        } else {
            std::ofstream out(target);
            if (!out) {
                std::cerr << "error: cannot open output file " << target << "\n";
                return 2;
            }
            out << result.text;
        }
        return result.exit_code;
    } catch (const bmhull::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
