#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tngp/als.hpp"
#include "tngp/data_io.hpp"
#include "tngp/hilbert_basis.hpp"

namespace tngp {

/// Flat key-value experiment description; see the README for the key
/// list. One dataset source only: either `synthetic = true` or a
/// `csv_train` path.
struct ExperimentConfig {
    std::string method{"projected"};

    bool synthetic{false};
    std::string csv_train;
    std::string csv_test;
    std::vector<std::string> input_cols;  // empty: all but target and 'f'
    std::string target_col{"y"};

    Index dims{0};
    Index n_train{0};
    Index n_test{0};
    std::string layout{"uniform"};
    double snr_db{10.0};
    std::string gen_ranks;             // empty: follow `ranks`
    std::optional<Index> gen_site{};   // 1-based

    std::vector<Index> m_per_dim;      // single entry broadcasts
    std::vector<double> half_widths;   // empty: fitted from training data
    double boundary_factor{0.5};

    HyperParams hyper{};

    std::string ranks{"5"};
    std::optional<Index> site{};       // 1-based
    std::optional<Index> budget{};     // hilbert-gp; default R_d M_d R_{d+1}

    AlsConfig als{};

    std::vector<Index> rank_list{1, 5, 10, 20};
    int n_seeds{10};
    std::string methods{"full-gp,hilbert-gp,projected"};
    bool warmup{true};
    Index full_gp_guard{20000};

    std::string out;
    std::uint64_t seed{0};
    int threads{0};  // 0: leave the global setting alone
};

ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Parses "max", a single uniform rank, or a comma-separated chain
/// (either the D-1 interior ranks or all D+1).
std::vector<Index> parse_ranks(const std::string& text,
                               const std::vector<Index>& modes);

void run_generate(const ExperimentConfig& cfg);
void run_fit(const ExperimentConfig& cfg);
void run_predict(const std::filesystem::path& model_path,
                 const std::filesystem::path& test_csv,
                 const std::filesystem::path& out_path);
void run_compare(const ExperimentConfig& cfg);
void run_bench(const ExperimentConfig& cfg);

}  // namespace tngp
