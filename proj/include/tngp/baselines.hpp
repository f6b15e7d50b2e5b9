#pragma once

#include <Eigen/Core>
#include <vector>

#include "tngp/hilbert_basis.hpp"
#include "tngp/projected_gp.hpp"

namespace tngp {

/// 1-based basis indices, one per dimension.
using MultiIndex = std::vector<Index>;

/// Dense kernel blocks for exact GP prediction.
struct KernelMatrixBundle {
    Eigen::MatrixXd k;            // N x N
    Eigen::MatrixXd k_star;       // N x N*
    Eigen::VectorXd k_star_star;  // N* self-variances
};

/// Squared-exponential kernel sigma_f^2 exp(-||x - x'||^2 / (2 l^2)).
KernelMatrixBundle kernel_matrices(const Eigen::MatrixXd& train_inputs,
                                   const Eigen::MatrixXd& test_inputs,
                                   const HyperParams& hp);

/// Exact GP prediction, O(N^3); refuses N above the guard.
Prediction full_gp_predict(const Eigen::MatrixXd& train_inputs,
                           const Eigen::VectorXd& y,
                           const Eigen::MatrixXd& test_inputs,
                           const HyperParams& hp, Index n_guard = 20000);

/// The `budget` multi-indices with the largest products of per-dimension
/// spectral weights, in descending order; exact ties broken by
/// lexicographic order. Lazy best-first enumeration, so the full index
/// set is never generated.
std::vector<MultiIndex> select_dominant_bases(const LambdaFactors& lf,
                                              Index budget);

/// Reduced-rank GP posterior over the weights of the selected bases
/// (spectral weights absorbed into the features, unit prior).
struct HilbertPosterior {
    std::vector<MultiIndex> bases;
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    BasisConfig basis;
    LambdaFactors lambda;
    HyperParams hyper;
};

HilbertPosterior hilbert_gp_fit(const Eigen::MatrixXd& train_inputs,
                                const Eigen::VectorXd& y,
                                const BasisConfig& cfg, const HyperParams& hp,
                                Index budget, Index budget_cap = 20000);

Prediction hilbert_gp_predict(const HilbertPosterior& posterior,
                              const Eigen::MatrixXd& test_inputs,
                              bool add_noise_variance = false);

/// Fit-and-predict convenience.
Prediction hilbert_gp_predict(const Eigen::MatrixXd& train_inputs,
                              const Eigen::VectorXd& y,
                              const Eigen::MatrixXd& test_inputs,
                              const BasisConfig& cfg, const HyperParams& hp,
                              Index budget, Index budget_cap = 20000);

/// Explicit N x budget matrix of scaled multivariate basis functions,
/// one column per multi-index.
Eigen::MatrixXd hilbert_feature_rows(const Eigen::MatrixXd& inputs,
                                     const BasisConfig& cfg,
                                     const LambdaFactors& lf,
                                     const std::vector<MultiIndex>& bases);

}  // namespace tngp
