#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tngp/hilbert_basis.hpp"
#include "tngp/tensor_train.hpp"

namespace tngp {

/// Per-dimension centering used to map raw inputs into the hyperbox;
/// half_widths are the matching L_d.
struct Scaling {
    Eigen::VectorXd centers;
    Eigen::VectorXd half_widths;

    static Scaling identity(const std::vector<double>& half_widths);
};

struct Dataset {
    Eigen::MatrixXd inputs;   // N x D, already centered
    Eigen::VectorXd targets;  // N
    Scaling scaling;
};

/// Generic parsed CSV: one header row of names, numeric cells below.
/// UTF-8, comma-separated, '.' decimal point, LF or CRLF.
struct CsvTable {
    std::vector<std::string> columns;
    Eigen::MatrixXd values;

    Index column_index(const std::string& name) const;  // parse error if absent
};

CsvTable read_csv(const std::filesystem::path& path);

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& columns,
               const Eigen::MatrixXd& values);

struct CsvSchema {
    std::vector<std::string> input_columns;
    std::string target_column;
};

/// Reads a dataset with the given column selection. Rejects non-finite
/// cells; all errors carry 1-based file line numbers. The returned
/// scaling is the identity (raw coordinates).
Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema);

/// Per dimension: center = column mean, L_d = (1 + boundary_factor) *
/// max |centered value|. A constant column gets L_d = 1 and a warning.
Scaling fit_scaling(const Eigen::MatrixXd& raw_inputs, double boundary_factor);

Eigen::MatrixXd apply_scaling(const Eigen::MatrixXd& raw, const Scaling& s);
Eigen::MatrixXd invert_scaling(const Eigen::MatrixXd& scaled, const Scaling& s);

struct SynthSpec {
    enum class Layout { grid, uniform };

    Index dims{2};
    Index n_train{100};
    Index n_test{50};
    Layout layout{Layout::uniform};
    BasisConfig basis;
    HyperParams hyper;  // sigma_y_sq is replaced by the SNR rule
    std::vector<Index> ranks;
    double snr_db{10.0};
    std::uint64_t seed{0};
    /// Core carrying the sampled weights; defaults to the middle one.
    std::optional<Index> site{};

    void validate() const;
};

struct SyntheticData {
    Dataset train;
    Dataset test;
    Eigen::VectorXd f_train;  // noiseless ground truth
    Eigen::VectorXd f_test;
    double sigma_y_sq{0.0};
    Index site{0};
};

/// Draws data from the projected model: a random train is
/// orthogonalized to give the projection, core weights are sampled from
/// the unit Gaussian, f = Phi Lambda^{1/2} W_{\d} w^(d), and noise is
/// scaled so that mean(f^2) / sigma_y^2 matches snr_db. Deterministic
/// per seed. Targets of both splits carry noise; the noiseless f values
/// are returned separately.
SyntheticData generate_synthetic(const SynthSpec& spec);

}  // namespace tngp
