#include "tngp/metrics.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace tngp {

namespace {

void check_lengths(Eigen::Index a, Eigen::Index b, const char* what) {
    if (a != b) {
        throw Error(ErrorCode::config, std::string(what) + ": lengths differ (" +
                                           std::to_string(a) + " vs " +
                                           std::to_string(b) + ")");
    }
}

double gaussian_loss(double y, double mean, double variance) {
    const double diff = y - mean;
    return 0.5 * (diff * diff / variance +
                  std::log(2.0 * std::numbers::pi * variance));
}

}  // namespace

double rmse(const Eigen::VectorXd& predicted, const Eigen::VectorXd& actual) {
    check_lengths(predicted.size(), actual.size(), "rmse");
    if (predicted.size() < 1) {
        throw Error(ErrorCode::config, "rmse needs at least one point");
    }
    return std::sqrt((predicted - actual).squaredNorm() /
                     static_cast<double>(predicted.size()));
}

double sum_log_loss(const Eigen::VectorXd& pred_mean,
                    const Eigen::VectorXd& pred_var,
                    const Eigen::VectorXd& actual, double sigma_y_sq) {
    check_lengths(pred_mean.size(), actual.size(), "sum_log_loss");
    check_lengths(pred_var.size(), actual.size(), "sum_log_loss");
    double total = 0.0;
    for (Eigen::Index i = 0; i < actual.size(); ++i) {
        const double variance = pred_var[i] + sigma_y_sq;
        if (!(variance > 0.0)) {
            throw Error(ErrorCode::domain,
                        "total predictive variance must be > 0");
        }
        total += gaussian_loss(actual[i], pred_mean[i], variance);
    }
    return total;
}

double msll(const Eigen::VectorXd& pred_mean, const Eigen::VectorXd& pred_var,
            const Eigen::VectorXd& actual, double sigma_y_sq,
            const Eigen::VectorXd& train_targets) {
    check_lengths(pred_mean.size(), actual.size(), "msll");
    check_lengths(pred_var.size(), actual.size(), "msll");
    if (actual.size() < 1 || train_targets.size() < 1) {
        throw Error(ErrorCode::config, "msll needs at least one point");
    }
    const double train_mean = train_targets.mean();
    const double train_var =
        (train_targets.array() - train_mean).square().mean();
    if (!(train_var > 0.0)) {
        throw Error(ErrorCode::domain,
                    "training targets have zero variance; the trivial "
                    "reference model is degenerate");
    }
    double total = 0.0;
    for (Eigen::Index i = 0; i < actual.size(); ++i) {
        const double variance = pred_var[i] + sigma_y_sq;
        if (!(variance > 0.0)) {
            throw Error(ErrorCode::domain,
                        "total predictive variance must be > 0");
        }
        total += gaussian_loss(actual[i], pred_mean[i], variance) -
                 gaussian_loss(actual[i], train_mean, train_var);
    }
    return total / static_cast<double>(actual.size());
}

}  // namespace tngp
