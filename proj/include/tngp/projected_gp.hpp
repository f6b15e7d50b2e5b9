#pragma once

#include <Eigen/Core>

#include "tngp/als.hpp"
#include "tngp/hilbert_basis.hpp"
#include "tngp/structured_ops.hpp"
#include "tngp/tensor_train.hpp"

namespace tngp {

/// Predictive function mean and variance (noise excluded unless asked).
struct Prediction {
    Eigen::VectorXd mean;
    Eigen::VectorXd variance;
};

/// Gaussian posterior over one vectorized core, together with everything
/// needed to evaluate it at new inputs: the fixed cores defining the
/// projection, the basis layout, and the spectral weights.
struct ProjectedPosterior {
    Index site{0};
    Eigen::VectorXd mean_core;
    Eigen::MatrixXd cov_core;
    TensorTrain projection_tt;  // canonical at `site`
    BasisConfig basis;
    LambdaFactors lambda;
    HyperParams hyper;
};

struct ProjectedFit {
    ProjectedPosterior posterior;
    FitTrace trace;
};

/// Posterior over the full weight vector: the mean as a train (core
/// `site` holds the posterior mean), the covariance implicitly as
/// W_{\d} cov_core W_{\d}^T. Dense forms are test oracles under the cap.
struct WeightPosterior {
    TensorTrain mean_tt;
    Eigen::MatrixXd cov_core;
    TensorTrain projection_tt;
    Index site{0};

    Eigen::VectorXd materialize_mean(Index cap = kDefaultMaterializeCap) const;
    Eigen::MatrixXd materialize_cov(Index cap = kDefaultMaterializeCap) const;
};

/// Middle core (0-based); the largest subspace under uniform ranks.
inline Index default_site(Index dims) { return (dims - 1) / 2; }

/// Bayesian update for the core weights under the unit Gaussian prior:
/// cov = sigma_y^2 (A^T A + sigma_y^2 I)^{-1}, mean = cov sigma_y^{-2} A^T y,
/// computed through a Cholesky factorization with a jitter ladder.
/// A zero-row A returns the prior (cov = I, mean = 0).
std::pair<Eigen::VectorXd, Eigen::MatrixXd> posterior_core(
    const Eigen::MatrixXd& a, const Eigen::VectorXd& y, double sigma_y_sq);

/// Full pipeline: ALS for the projection, then the Bayesian core update
/// on the projected features. Inputs must lie inside the hyperbox.
/// als_cfg.reg_lambda defaults to hp.sigma_y_sq when unset.
ProjectedFit fit(const Eigen::MatrixXd& train_inputs, const Eigen::VectorXd& y,
                 const BasisConfig& cfg, const HyperParams& hp,
                 const std::vector<Index>& ranks, const AlsConfig& als_cfg,
                 Index site);

/// Back-projection of the core posterior to the weight space.
WeightPosterior project_posterior(const ProjectedPosterior& pp);

/// Predictive mean and variance at new inputs; nothing of size prod(M_d)
/// is formed. Inputs outside the hyperbox trigger a warning only.
/// Negative variances above -1e-10 are clipped to zero; anything lower
/// is a numeric error.
Prediction predict(const ProjectedPosterior& pp,
                   const Eigen::MatrixXd& test_inputs,
                   bool add_noise_variance = false);

}  // namespace tngp
