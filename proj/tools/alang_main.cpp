// Experiment CLI: `alang run <spec.toml> --out <dir>`, `alang table
// <suite.toml>`, `alang check`.

#include <CLI11.hpp>

#include <iostream>

#include "alang/experiment.hpp"
#include "alang/sampler.hpp"
#include "alang/selfcheck.hpp"

namespace {

constexpr int kExitSpecError = 2;
constexpr int kExitNumericAbort = 3;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"anchored Langevin sampling experiments"};
    app.require_subcommand(1);

    std::string spec_path, out_dir = "out";
    std::int64_t seed_override = -1;
    int threads = 0;

    auto* run = app.add_subcommand("run", "run one experiment spec");
    run->add_option("spec", spec_path, "experiment spec (TOML)")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--seed", seed_override, "override the spec seed");
    run->add_option("--threads", threads, "worker threads (0 = all cores)");

    std::string suite_path, table_out = "out";
    auto* table = app.add_subcommand("table", "regenerate the Laplace iterations table");
    table->add_option("suite", suite_path, "table suite spec (TOML)")->required();
    table->add_option("--out", table_out, "output directory");
    table->add_option("--threads", threads, "worker threads (0 = all cores)");

    auto* check = app.add_subcommand("check", "run the property/oracle self checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            alang::ExperimentSpec spec;
            try {
                spec = alang::parse_experiment_spec(spec_path);
            } catch (const std::exception& e) {
                std::cerr << "spec error: " << e.what() << "\n";
                return kExitSpecError;
            }
            if (seed_override >= 0) spec.seed = static_cast<std::uint64_t>(seed_override);
            if (threads > 0) spec.threads = threads;
            const auto result = alang::run_experiment(spec);
            alang::emit_results(result, out_dir);
            std::cout << "wrote " << out_dir << " (" << result.metric_name
                      << " final = " << result.final_metric
                      << ", wall = " << result.wall_seconds << "s)\n";
            return 0;
        }
        if (table->parsed()) {
            alang::TableSuite suite;
            try {
                suite = alang::parse_table_suite(suite_path);
            } catch (const std::exception& e) {
                std::cerr << "spec error: " << e.what() << "\n";
                return kExitSpecError;
            }
            if (threads > 0) suite.threads = threads;
            alang::run_table_suite(suite, table_out);
            std::cout << "wrote " << table_out << "/table.csv\n";
            return 0;
        }
        if (check->parsed()) {
            return alang::run_selfcheck(std::cout) == 0 ? 0 : 1;
        }
    } catch (const alang::NumericAbort& e) {
        std::cerr << "numeric abort: " << e.what() << "\n";
        return kExitNumericAbort;
    } catch (const std::invalid_argument& e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return kExitSpecError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
