#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "tngp/hilbert_basis.hpp"
#include "tngp/tensor_train.hpp"

namespace tngp {

/// Factor-wise storage of the feature matrix: one N x M_d block per
/// dimension. The N x prod(M_d) Khatri-Rao product is never formed.
struct FeatureSet {
    std::vector<Eigen::MatrixXd> factors;

    Index n() const { return factors.empty() ? 0 : factors.front().rows(); }
    Index dims() const { return static_cast<Index>(factors.size()); }

    static FeatureSet build(const Eigen::MatrixXd& inputs,
                            const BasisConfig& cfg);

    /// Folds sqrt(lambda) into each factor column, making downstream
    /// products free of the spectral weights.
    FeatureSet scaled(const LambdaFactors& lf) const;

    void validate() const;
};

/// N x (R_d M_d R_{d+1}) matrix equal to Phi Lambda^{1/2} W_{\d},
/// assembled dimension by dimension: per-point interface vectors are
/// swept in from both sides (O(N D R^2 M) total) and combined with the
/// site-d factor (O(N R^2 M_d)). Column ordering matches vec(core d).
/// tt does not have to be canonical; the solver keeps it canonical so
/// the subproblem conditioning matches the full problem.
Eigen::MatrixXd project_features(const FeatureSet& fs, const LambdaFactors& lf,
                                 const TensorTrain& tt, Index site);

/// Same projection applied to fresh inputs; row n is
/// phi(x*_n) Lambda^{1/2} W_{\d}.
Eigen::MatrixXd project_test_rows(const Eigen::MatrixXd& test_inputs,
                                  const BasisConfig& cfg,
                                  const LambdaFactors& lf,
                                  const TensorTrain& tt, Index site);

/// (A^T A, A^T y) with A^T A exactly symmetric.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> gram_and_moment(
    const Eigen::MatrixXd& a, const Eigen::VectorXd& y);

namespace detail {

/// One left-to-right interface update: given per-point interfaces g
/// (N x R_d) and the dimension-d factor block (N x M_d), contracts with
/// the core to produce the N x R_{d+1} interfaces.
Eigen::MatrixXd interface_step_left(const Eigen::MatrixXd& g,
                                    const Eigen::MatrixXd& phi,
                                    const Core3& core);

/// Mirror image, right to left: N x R_{d+1} in, N x R_d out.
Eigen::MatrixXd interface_step_right(const Eigen::MatrixXd& g,
                                     const Eigen::MatrixXd& phi,
                                     const Core3& core);

/// Combines left interfaces, the site factor block, and right interfaces
/// into the projected feature matrix (columns ordered like vec(core)).
Eigen::MatrixXd assemble_projected(const Eigen::MatrixXd& left,
                                   const Eigen::MatrixXd& phi,
                                   const Eigen::MatrixXd& right);

}  // namespace detail

}  // namespace tngp
