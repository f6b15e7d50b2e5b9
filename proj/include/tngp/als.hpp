#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tngp/structured_ops.hpp"
#include "tngp/tensor_train.hpp"

namespace tngp {

struct AlsConfig {
    int max_sweeps{20};
    double rel_tol{1e-6};
    /// Ridge weight on the core vector. Callers that know the noise
    /// level should leave this unset; the GP layer fills in sigma_y_sq,
    /// which makes the core update the MAP estimate under the unit
    /// Gaussian core prior.
    std::optional<double> reg_lambda{};
    std::uint64_t seed{0};

    void validate() const;
};

struct FitTrace {
    /// Regularized objective after every core update (non-increasing).
    std::vector<double> per_update;
    /// Objective at the end of each forward+backward sweep.
    std::vector<double> per_sweep;
    int sweeps{0};
    bool converged{false};
};

struct AlsResult {
    TensorTrain tt;
    FitTrace trace;
};

/// Test instrumentation: called with the current train (tagged with its
/// canonical site) immediately before each core update.
using AlsInspector = std::function<void(const TensorTrain&, Index site)>;

/// Ridge solve for one core: (A^T A + lambda I)^{-1} A^T y. With
/// lambda = 0 and a numerically singular Gram matrix, falls back to the
/// minimum-norm least-squares solution and emits a warning.
Eigen::VectorXd core_update(const Eigen::MatrixXd& a, const Eigen::VectorXd& y,
                            double reg_lambda);

/// True when the relative change between the last two sweep objectives
/// is below rel_tol (an exactly flat trace always converges).
bool converged(const std::vector<double>& sweep_trace, double rel_tol);

/// Alternating linear scheme for min ||y - Phi Lambda^{1/2} w||^2 +
/// lambda ||w||^2 over trains of the given ranks. One sweep updates all
/// cores forward then backward; the canonical center moves one site per
/// update with a single QR. The returned train is canonical at `site`,
/// ready for the Bayesian step on that core.
AlsResult als_fit(const FeatureSet& fs, const LambdaFactors& lf,
                  const Eigen::VectorXd& y, const std::vector<Index>& ranks,
                  const AlsConfig& cfg, Index site,
                  const AlsInspector& inspect = {});

}  // namespace tngp
