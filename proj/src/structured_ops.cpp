#include "tngp/structured_ops.hpp"

#include <cmath>
#include <string>

#include "tngp/parallel.hpp"

namespace tngp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

FeatureSet FeatureSet::build(const Eigen::MatrixXd& inputs,
                             const BasisConfig& cfg) {
    cfg.validate();
    FeatureSet fs;
    fs.factors.reserve(static_cast<std::size_t>(cfg.dims()));
    for (Index d = 0; d < cfg.dims(); ++d) {
        fs.factors.push_back(feature_matrix(inputs, d, cfg));
    }
    return fs;
}

FeatureSet FeatureSet::scaled(const LambdaFactors& lf) const {
    validate();
    if (lf.dims() != dims()) {
        throw Error(ErrorCode::config, "lambda factors dimension mismatch");
    }
    FeatureSet out;
    out.factors.reserve(factors.size());
    for (std::size_t d = 0; d < factors.size(); ++d) {
        if (lf.diag_per_dim[d].size() != factors[d].cols()) {
            throw Error(ErrorCode::config,
                        "lambda factor length mismatch in dimension " +
                            std::to_string(d));
        }
        out.factors.push_back(factors[d] *
                              lf.diag_per_dim[d].cwiseSqrt().asDiagonal());
    }
    return out;
}

void FeatureSet::validate() const {
    if (factors.empty()) {
        throw Error(ErrorCode::config, "feature set has no dimensions");
    }
    for (const auto& factor : factors) {
        if (factor.rows() != factors.front().rows()) {
            throw Error(ErrorCode::config,
                        "feature factors disagree on row count");
        }
    }
}

namespace detail {

Eigen::MatrixXd interface_step_left(const Eigen::MatrixXd& g,
                                    const Eigen::MatrixXd& phi,
                                    const Core3& core) {
    if (g.cols() != core.left() || phi.cols() != core.mode() ||
        g.rows() != phi.rows()) {
        throw Error(ErrorCode::config, "interface step shape mismatch");
    }
    MatrixXd out = MatrixXd::Zero(g.rows(), core.right());
    for (Index m = 0; m < core.mode(); ++m) {
        out.noalias() +=
            (g.array().colwise() * phi.col(m).array()).matrix() *
            core.mode_slice(m);
    }
    return out;
}

Eigen::MatrixXd interface_step_right(const Eigen::MatrixXd& g,
                                     const Eigen::MatrixXd& phi,
                                     const Core3& core) {
    if (g.cols() != core.right() || phi.cols() != core.mode() ||
        g.rows() != phi.rows()) {
        throw Error(ErrorCode::config, "interface step shape mismatch");
    }
    MatrixXd out = MatrixXd::Zero(g.rows(), core.left());
    for (Index m = 0; m < core.mode(); ++m) {
        out.noalias() +=
            (g.array().colwise() * phi.col(m).array()).matrix() *
            core.mode_slice(m).transpose();
    }
    return out;
}

Eigen::MatrixXd assemble_projected(const Eigen::MatrixXd& left,
                                   const Eigen::MatrixXd& phi,
                                   const Eigen::MatrixXd& right) {
    const Index n = left.rows();
    const Index r_left = left.cols();
    const Index m_count = phi.cols();
    const Index r_right = right.cols();
    MatrixXd a(n, r_left * m_count * r_right);
    parallel_for(r_left * m_count, [&](Index begin, Index end) {
        for (Index rm = begin; rm < end; ++rm) {
            const Index r = rm / m_count;
            const Index m = rm % m_count;
            const VectorXd scaled =
                left.col(r).cwiseProduct(phi.col(m));
            for (Index s = 0; s < r_right; ++s) {
                a.col(rm * r_right + s) = scaled.cwiseProduct(right.col(s));
            }
        }
    });
    return a;
}

}  // namespace detail

Eigen::MatrixXd project_features(const FeatureSet& fs, const LambdaFactors& lf,
                                 const TensorTrain& tt, Index site) {
    fs.validate();
    if (fs.dims() != tt.dims() || lf.dims() != tt.dims()) {
        throw Error(ErrorCode::config,
                    "feature set, lambda factors, and tensor train disagree "
                    "on dimension count");
    }
    if (site < 0 || site >= tt.dims()) {
        throw Error(ErrorCode::config, "site out of range");
    }
    for (Index d = 0; d < tt.dims(); ++d) {
        if (fs.factors[static_cast<std::size_t>(d)].cols() != tt.mode(d)) {
            throw Error(ErrorCode::config,
                        "factor width does not match core mode in dimension " +
                            std::to_string(d));
        }
    }
    const FeatureSet scaled = fs.scaled(lf);
    const Index n = scaled.n();

    MatrixXd left = MatrixXd::Ones(n, 1);
    for (Index d = 0; d < site; ++d) {
        left = detail::interface_step_left(
            left, scaled.factors[static_cast<std::size_t>(d)], tt.core(d));
    }
    MatrixXd right = MatrixXd::Ones(n, 1);
    for (Index d = tt.dims() - 1; d > site; --d) {
        right = detail::interface_step_right(
            right, scaled.factors[static_cast<std::size_t>(d)], tt.core(d));
    }
    return detail::assemble_projected(
        left, scaled.factors[static_cast<std::size_t>(site)], right);
}

Eigen::MatrixXd project_test_rows(const Eigen::MatrixXd& test_inputs,
                                  const BasisConfig& cfg,
                                  const LambdaFactors& lf,
                                  const TensorTrain& tt, Index site) {
    return project_features(FeatureSet::build(test_inputs, cfg), lf, tt, site);
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> gram_and_moment(
    const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
    if (a.rows() != y.size()) {
        throw Error(ErrorCode::config,
                    "feature rows and target length differ (" +
                        std::to_string(a.rows()) + " vs " +
                        std::to_string(y.size()) + ")");
    }
    const Index k = a.cols();
    MatrixXd gram = MatrixXd::Zero(k, k);
    gram.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose());
    gram.triangularView<Eigen::StrictlyUpper>() =
        gram.transpose().triangularView<Eigen::StrictlyUpper>();
    return {std::move(gram), a.transpose() * y};
}

}  // namespace tngp
