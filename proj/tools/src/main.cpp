#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lsdnet/errors.hpp"
#include "lsdnet/run.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

// Loads the config and applies the optional command-line seed override,
// keeping the summary's config echo honest about the seed actually used.
lsdnet::RunConfig load(const std::string& config_path, const std::optional<std::uint64_t>& seed) {
    lsdnet::RunConfig config = lsdnet::load_run_config(config_path);
    if (seed) {
        config.seed = *seed;
        bool echoed = false;
        for (auto& [key, value] : config.echo) {
            if (key == "seed") {
                value = std::to_string(*seed);
                echoed = true;
            }
        }
        if (!echoed) {
            config.echo.emplace_back("seed", std::to_string(*seed));
        }
    }
    return config;
}

void print_summary_line(const lsdnet::RunSummary& summary) {
    std::printf("k=%zu coverage=%zu/%zu rho=%.9g epochs=%ld wall=%.3fs\n", summary.final_k,
                summary.coverage.n_detected, summary.coverage.n_targets, summary.coverage.rho,
                summary.epochs_executed, summary.wall_time_seconds);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Collaborative-sensing deployment planner"};
    app.require_subcommand(1);

    std::string config_path;
    std::string coords_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    app.add_option("--seed", seed, "Override the config seed");

    CLI::App* deploy = app.add_subcommand("deploy", "Sample a pattern and train placement");
    deploy->add_option("--config", config_path, "Run configuration file")->required();

    CLI::App* evaluate = app.add_subcommand("evaluate", "Evaluate fixed coordinates");
    evaluate->add_option("--config", config_path, "Run configuration file")->required();
    evaluate->add_option("--coords", coords_path, "Sensor coordinates CSV")->required();

    CLI::App* minsensors =
        app.add_subcommand("minsensors", "Acquire a minimal sensor set with full coverage");
    minsensors->add_option("--config", config_path, "Run configuration file")->required();

    CLI::App* generate = app.add_subcommand("generate", "Sample a deployment pattern only");
    generate->add_option("--config", config_path, "Run configuration file")->required();
    generate->add_option("--out", out_path, "Destination coordinates CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        const lsdnet::RunConfig config = load(config_path, seed);
        lsdnet::RunSummary summary;
        if (deploy->parsed()) {
            summary = lsdnet::run_deploy(config);
        } else if (evaluate->parsed()) {
            summary = lsdnet::run_evaluate(config, coords_path);
        } else if (minsensors->parsed()) {
            summary = lsdnet::run_minsensors(config);
        } else {
            summary = lsdnet::run_generate(config, out_path);
        }
        print_summary_line(summary);
        return kExitOk;
    } catch (const lsdnet::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const lsdnet::MissingParam& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const lsdnet::BadFile& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitConfig;
    } catch (const lsdnet::DegenerateRegion& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
}
