#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "tngp/errors.hpp"
#include "tngp/experiment.hpp"
#include "tngp/parallel.hpp"

namespace {

int exit_code_for(tngp::ErrorCode code) {
    switch (code) {
        case tngp::ErrorCode::config: return 2;
        case tngp::ErrorCode::io: return 3;
        case tngp::ErrorCode::parse: return 4;
        case tngp::ErrorCode::domain: return 5;
        case tngp::ErrorCode::size: return 6;
        case tngp::ErrorCode::numeric: return 7;
    }
    return 1;
}

struct Overrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string method;
    std::string ranks;
    std::optional<tngp::Index> site;
    std::optional<int> threads;
};

tngp::ExperimentConfig resolve_config(const Overrides& ov, bool need_config) {
    tngp::ExperimentConfig cfg;
    if (!ov.config_path.empty()) {
        cfg = tngp::load_experiment_config(ov.config_path);
    } else if (need_config) {
        throw tngp::Error(tngp::ErrorCode::config, "--config is required");
    }
    if (ov.seed) cfg.seed = *ov.seed;
    if (!ov.out.empty()) cfg.out = ov.out;
    if (!ov.method.empty()) cfg.method = ov.method;
    if (!ov.ranks.empty()) cfg.ranks = ov.ranks;
    if (ov.site) cfg.site = *ov.site;
    if (ov.threads) cfg.threads = *ov.threads;

    int threads = cfg.threads;
    if (!ov.threads && threads == 0) {
        if (const char* env = std::getenv("TNGP_THREADS")) {
            threads = std::atoi(env);
        }
    }
    if (threads != 0 || ov.threads) tngp::set_num_threads(threads);
    return cfg;
}

void add_common_flags(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--config", ov.config_path, "experiment config file");
    cmd->add_option("--seed", ov.seed, "seed override");
    cmd->add_option("--out", ov.out, "output path override");
    cmd->add_option("--method", ov.method, "method override");
    cmd->add_option("--ranks", ov.ranks, "rank spec override");
    cmd->add_option("--site", ov.site, "Bayesian core (1-based) override");
    cmd->add_option("--threads", ov.threads,
                    "worker threads (0 = all cores; env TNGP_THREADS)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "tngp - Gaussian process regression with tensor-train projected "
        "basis functions"};
    app.require_subcommand(1);

    Overrides ov;
    std::string model_path, test_csv;

    auto* cmd_generate =
        app.add_subcommand("generate", "write synthetic train/test CSVs");
    add_common_flags(cmd_generate, ov);

    auto* cmd_fit = app.add_subcommand("fit", "fit a model and save it");
    add_common_flags(cmd_fit, ov);

    auto* cmd_predict =
        app.add_subcommand("predict", "predict from a saved model");
    cmd_predict->add_option("model", model_path, "model file")->required();
    cmd_predict->add_option("test_csv", test_csv, "inputs CSV")->required();
    add_common_flags(cmd_predict, ov);

    auto* cmd_compare = app.add_subcommand(
        "compare", "rank sweep of all three methods with seed averaging");
    add_common_flags(cmd_compare, ov);

    auto* cmd_bench = app.add_subcommand(
        "bench", "single-run timing/accuracy table for the chosen methods");
    add_common_flags(cmd_bench, ov);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_generate->parsed()) {
            tngp::run_generate(resolve_config(ov, true));
        } else if (cmd_fit->parsed()) {
            tngp::run_fit(resolve_config(ov, true));
        } else if (cmd_predict->parsed()) {
            const auto cfg = resolve_config(ov, false);
            const std::string out =
                cfg.out.empty() ? "predictions.csv" : cfg.out;
            tngp::run_predict(model_path, test_csv, out);
        } else if (cmd_compare->parsed()) {
            tngp::run_compare(resolve_config(ov, true));
        } else if (cmd_bench->parsed()) {
            tngp::run_bench(resolve_config(ov, true));
        }
    } catch (const tngp::Error& e) {
        std::cerr << "error " << e.code_name() << ": " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error internal: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
