#pragma once

#include <Eigen/Core>
#include <chrono>

#include "tngp/errors.hpp"

namespace tngp {

struct EvalReport {
    double rmse{0.0};
    double msll{0.0};
    double sum_log_loss{0.0};
    Eigen::Index n_points{0};
    double wall_time_fit{0.0};
    double wall_time_predict{0.0};
};

double rmse(const Eigen::VectorXd& predicted, const Eigen::VectorXd& actual);

/// Mean standardized log loss: the mean Gaussian negative log density of
/// the actuals under N(pred_mean, pred_var + sigma_y_sq), minus the same
/// loss of the trivial Gaussian fitted to the training targets (their
/// mean and population variance). Zero means no better than the trivial
/// model; negative is better.
double msll(const Eigen::VectorXd& pred_mean, const Eigen::VectorXd& pred_var,
            const Eigen::VectorXd& actual, double sigma_y_sq,
            const Eigen::VectorXd& train_targets);

/// Unstandardized companion: the summed Gaussian negative log density.
/// Reported alongside msll for qualitative comparisons only.
double sum_log_loss(const Eigen::VectorXd& pred_mean,
                    const Eigen::VectorXd& pred_var,
                    const Eigen::VectorXd& actual, double sigma_y_sq);

class Stopwatch {
public:
    Stopwatch() : start_(Clock::now()) {}
    void reset() { start_ = Clock::now(); }
    double seconds() const {
        return std::chrono::duration<double>(Clock::now() - start_).count();
    }

private:
    using Clock = std::chrono::steady_clock;
    Clock::time_point start_;
};

}  // namespace tngp
