#include "tngp/projected_gp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

namespace tngp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

/// LLT of B + jitter I, escalating jitter through {0, 1e-10,
/// 1e-8 trace(B)/k} before giving up.
Eigen::LLT<MatrixXd> llt_with_jitter(const MatrixXd& b, const char* what) {
    const Index k = b.rows();
    const double scaled = 1e-8 * b.trace() / static_cast<double>(std::max<Index>(k, 1));
    const double ladder[] = {0.0, 1e-10, scaled};
    for (double jitter : ladder) {
        MatrixXd shifted = b;
        if (jitter > 0.0) shifted.diagonal().array() += jitter;
        Eigen::LLT<MatrixXd> llt(shifted);
        if (llt.info() == Eigen::Success) {
            if (jitter > 0.0) {
                warn(std::string(what) + ": added jitter " +
                     std::to_string(jitter) + " to reach positive definiteness");
            }
            return llt;
        }
    }
    throw Error(ErrorCode::numeric,
                std::string(what) + ": factorization failed after jitter ladder");
}

void check_inside_box(const Eigen::MatrixXd& inputs, const BasisConfig& cfg,
                      bool fatal) {
    Index outside = 0;
    for (Index d = 0; d < cfg.dims(); ++d) {
        const double limit = cfg.half_widths[static_cast<std::size_t>(d)];
        outside += (inputs.col(d).array().abs() > limit).count();
    }
    if (outside == 0) return;
    const std::string msg = std::to_string(outside) +
                            " input coordinates lie outside the hyperbox";
    if (fatal) {
        throw Error(ErrorCode::domain,
                    msg + "; center and rescale the inputs first");
    }
    warn(msg + "; sine features are still evaluated there");
}

}  // namespace

std::pair<Eigen::VectorXd, Eigen::MatrixXd> posterior_core(
    const Eigen::MatrixXd& a, const Eigen::VectorXd& y, double sigma_y_sq) {
    if (!(sigma_y_sq > 0.0)) {
        throw Error(ErrorCode::domain, "sigma_y_sq must be > 0");
    }
    auto [gram, moment] = gram_and_moment(a, y);
    gram.diagonal().array() += sigma_y_sq;
    const auto llt = llt_with_jitter(gram, "posterior core");
    VectorXd mean = llt.solve(moment);
    MatrixXd cov =
        sigma_y_sq * llt.solve(MatrixXd::Identity(gram.rows(), gram.cols()));
    cov = ((cov + cov.transpose()) * 0.5).eval();
    return {std::move(mean), std::move(cov)};
}

ProjectedFit fit(const Eigen::MatrixXd& train_inputs, const Eigen::VectorXd& y,
                 const BasisConfig& cfg, const HyperParams& hp,
                 const std::vector<Index>& ranks, const AlsConfig& als_cfg,
                 Index site) {
    cfg.validate();
    hp.validate();
    if (train_inputs.cols() != cfg.dims()) {
        throw Error(ErrorCode::config, "input width does not match basis dims");
    }
    if (site < 0 || site >= cfg.dims()) {
        throw Error(ErrorCode::config, "site out of range");
    }
    check_inside_box(train_inputs, cfg, /*fatal=*/true);

    AlsConfig als = als_cfg;
    if (!als.reg_lambda) als.reg_lambda = hp.sigma_y_sq;

    const FeatureSet fs = FeatureSet::build(train_inputs, cfg);
    const LambdaFactors lf = lambda_factors(cfg, hp);
    AlsResult als_result = als_fit(fs, lf, y, ranks, als, site);

    const MatrixXd a = project_features(fs, lf, als_result.tt, site);
    auto [mean, cov] = posterior_core(a, y, hp.sigma_y_sq);

    ProjectedPosterior pp;
    pp.site = site;
    pp.mean_core = std::move(mean);
    pp.cov_core = std::move(cov);
    pp.projection_tt = std::move(als_result.tt);
    pp.basis = cfg;
    pp.lambda = lf;
    pp.hyper = hp;
    return {std::move(pp), std::move(als_result.trace)};
}

Eigen::VectorXd WeightPosterior::materialize_mean(Index cap) const {
    return mean_tt.contract_full(cap);
}

Eigen::MatrixXd WeightPosterior::materialize_cov(Index cap) const {
    const Index m =
        detail::checked_product(projection_tt.modes(), cap, "covariance rows");
    if (m > cap / std::max<Index>(m, 1)) {
        throw Error(ErrorCode::size,
                    "materialized covariance exceeds materialization cap");
    }
    const MatrixXd w = projection_tt.materialize_projection(site, cap);
    return w * cov_core * w.transpose();
}

WeightPosterior project_posterior(const ProjectedPosterior& pp) {
    const Core3& center = pp.projection_tt.core(pp.site);
    if (pp.mean_core.size() != center.size()) {
        throw Error(ErrorCode::config,
                    "posterior mean length does not match core size");
    }
    WeightPosterior wp;
    wp.mean_tt = pp.projection_tt.with_core(
        pp.site, Core3::from_vec(pp.mean_core, center.left(), center.mode(),
                                 center.right()));
    wp.cov_core = pp.cov_core;
    wp.projection_tt = pp.projection_tt;
    wp.site = pp.site;
    return wp;
}

Prediction predict(const ProjectedPosterior& pp,
                   const Eigen::MatrixXd& test_inputs,
                   bool add_noise_variance) {
    if (test_inputs.cols() != pp.basis.dims()) {
        throw Error(ErrorCode::config,
                    "test input width does not match basis dims");
    }
    check_inside_box(test_inputs, pp.basis, /*fatal=*/false);

    const MatrixXd a_star = project_test_rows(test_inputs, pp.basis, pp.lambda,
                                              pp.projection_tt, pp.site);
    Prediction out;
    out.mean = a_star * pp.mean_core;
    const MatrixXd half = a_star * pp.cov_core;
    out.variance = half.cwiseProduct(a_star).rowwise().sum();
    for (Index i = 0; i < out.variance.size(); ++i) {
        if (out.variance[i] < 0.0) {
            if (out.variance[i] < -1e-10) {
                throw Error(ErrorCode::numeric,
                            "predictive variance " +
                                std::to_string(out.variance[i]) +
                                " below the clipping threshold");
            }
            out.variance[i] = 0.0;
        }
    }
    if (add_noise_variance) {
        out.variance.array() += pp.hyper.sigma_y_sq;
    }
    return out;
}

}  // namespace tngp
