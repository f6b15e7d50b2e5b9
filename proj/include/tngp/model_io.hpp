#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tngp/baselines.hpp"
#include "tngp/data_io.hpp"
#include "tngp/projected_gp.hpp"

namespace tngp {

/// Stored training data for the exact GP (prediction redoes the solve).
struct GpModel {
    Eigen::MatrixXd inputs;  // already centered
    Eigen::VectorXd targets;
    HyperParams hyper;
    Index n_guard{20000};
};

/// On-disk model: 4-byte magic "TNGP", a little-endian uint32 header
/// length, a UTF-8 JSON header (shapes, basis, hyperparameters, input
/// scaling), then the arrays as little-endian IEEE-754 binary64 in
/// row-major order. Round trips are bit-exact.
struct ModelFile {
    std::string method;  // "projected" | "hilbert-gp" | "full-gp"
    Scaling scaling;
    std::vector<std::string> input_columns;
    std::optional<ProjectedPosterior> projected;
    std::optional<HilbertPosterior> hilbert;
    std::optional<GpModel> full_gp;
};

void save_model(const ModelFile& model, const std::filesystem::path& path);
ModelFile load_model(const std::filesystem::path& path);

/// Applies the stored centering to raw inputs and dispatches to the
/// stored method's predictor.
Prediction model_predict(const ModelFile& model,
                         const Eigen::MatrixXd& raw_inputs);

}  // namespace tngp
