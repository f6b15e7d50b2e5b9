#include "tngp/baselines.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <string>

#include "tngp/parallel.hpp"

namespace tngp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd se_kernel_block(const MatrixXd& a, const MatrixXd& b,
                         const HyperParams& hp) {
    const VectorXd a_sq = a.rowwise().squaredNorm();
    const VectorXd b_sq = b.rowwise().squaredNorm();
    MatrixXd dist2 =
        (-2.0 * a * b.transpose()).colwise() + a_sq;
    dist2.rowwise() += b_sq.transpose();
    const double inv_two_l_sq =
        1.0 / (2.0 * hp.length_scale * hp.length_scale);
    MatrixXd out(a.rows(), b.rows());
    parallel_for(b.rows(), [&](Index begin, Index end) {
        for (Index j = begin; j < end; ++j) {
            out.col(j) = hp.sigma_f_sq *
                         (-dist2.col(j).cwiseMax(0.0) * inv_two_l_sq)
                             .array()
                             .exp();
        }
    });
    return out;
}

void clip_variances(Eigen::VectorXd& variance) {
    for (Index i = 0; i < variance.size(); ++i) {
        if (variance[i] < 0.0) {
            if (variance[i] < -1e-10) {
                throw Error(ErrorCode::numeric,
                            "predictive variance " +
                                std::to_string(variance[i]) +
                                " below the clipping threshold");
            }
            variance[i] = 0.0;
        }
    }
}

Eigen::LLT<MatrixXd> llt_ladder(const MatrixXd& b, const char* what) {
    const double scaled =
        1e-8 * b.trace() / static_cast<double>(std::max<Index>(b.rows(), 1));
    const double ladder[] = {0.0, 1e-10, scaled};
    for (double jitter : ladder) {
        MatrixXd shifted = b;
        if (jitter > 0.0) shifted.diagonal().array() += jitter;
        Eigen::LLT<MatrixXd> llt(shifted);
        if (llt.info() == Eigen::Success) return llt;
    }
    throw Error(ErrorCode::numeric,
                std::string(what) + ": factorization failed after jitter ladder");
}

}  // namespace

KernelMatrixBundle kernel_matrices(const Eigen::MatrixXd& train_inputs,
                                   const Eigen::MatrixXd& test_inputs,
                                   const HyperParams& hp) {
    hp.validate();
    if (train_inputs.cols() != test_inputs.cols()) {
        throw Error(ErrorCode::config, "train and test input widths differ");
    }
    KernelMatrixBundle bundle;
    bundle.k = se_kernel_block(train_inputs, train_inputs, hp);
    bundle.k_star = se_kernel_block(train_inputs, test_inputs, hp);
    bundle.k_star_star =
        VectorXd::Constant(test_inputs.rows(), hp.sigma_f_sq);
    return bundle;
}

Prediction full_gp_predict(const Eigen::MatrixXd& train_inputs,
                           const Eigen::VectorXd& y,
                           const Eigen::MatrixXd& test_inputs,
                           const HyperParams& hp, Index n_guard) {
    hp.validate();
    const Index n = train_inputs.rows();
    if (n != y.size()) {
        throw Error(ErrorCode::config, "target length does not match rows");
    }
    if (n > n_guard) {
        throw Error(ErrorCode::size,
                    "dense GP solve refused: N = " + std::to_string(n) +
                        " exceeds guard " + std::to_string(n_guard));
    }
    KernelMatrixBundle bundle = kernel_matrices(train_inputs, test_inputs, hp);
    bundle.k.diagonal().array() += hp.sigma_y_sq;
    const auto llt = llt_ladder(bundle.k, "full GP");

    Prediction out;
    out.mean = bundle.k_star.transpose() * llt.solve(y);
    // V(f*) = k** - ||L^{-1} k*||^2 columnwise
    const MatrixXd half = llt.matrixL().solve(bundle.k_star);
    out.variance =
        bundle.k_star_star - half.colwise().squaredNorm().transpose();
    clip_variances(out.variance);
    return out;
}

std::vector<MultiIndex> select_dominant_bases(const LambdaFactors& lf,
                                              Index budget) {
    const Index dims = lf.dims();
    if (dims < 1) {
        throw Error(ErrorCode::config, "lambda factors have no dimensions");
    }
    if (budget < 1) {
        throw Error(ErrorCode::config, "basis budget must be >= 1");
    }
    // saturating total so 20^18-sized grids do not overflow
    const Index saturate = std::numeric_limits<Index>::max() / 2;
    Index total = 1;
    for (const auto& diag : lf.diag_per_dim) {
        const auto m = static_cast<Index>(diag.size());
        total = total > saturate / m ? saturate : total * m;
    }
    if (budget > total) {
        throw Error(ErrorCode::config,
                    "basis budget " + std::to_string(budget) +
                        " exceeds the total basis count");
    }

    std::vector<VectorXd> logs;
    logs.reserve(static_cast<std::size_t>(dims));
    for (const auto& diag : lf.diag_per_dim) {
        logs.push_back(diag.array().log().matrix());
    }

    struct Node {
        double score;
        MultiIndex idx;
    };
    // max-heap on score; exact score ties pop in lexicographic order
    const auto worse = [](const Node& a, const Node& b) {
        if (a.score != b.score) return a.score < b.score;
        return a.idx > b.idx;
    };
    std::priority_queue<Node, std::vector<Node>, decltype(worse)> heap(worse);
    std::set<MultiIndex> seen;

    MultiIndex first(static_cast<std::size_t>(dims), 1);
    double first_score = 0.0;
    for (Index d = 0; d < dims; ++d) {
        first_score += logs[static_cast<std::size_t>(d)][0];
    }
    heap.push({first_score, first});
    seen.insert(first);

    std::vector<MultiIndex> selected;
    selected.reserve(static_cast<std::size_t>(budget));
    while (static_cast<Index>(selected.size()) < budget) {
        Node node = heap.top();
        heap.pop();
        selected.push_back(node.idx);
        // successors: one coordinate stepped up; the per-dimension
        // weights are non-increasing, so successors never score higher
        for (Index d = 0; d < dims; ++d) {
            const auto du = static_cast<std::size_t>(d);
            if (node.idx[du] >=
                static_cast<Index>(lf.diag_per_dim[du].size())) {
                continue;
            }
            MultiIndex next = node.idx;
            next[du] += 1;
            if (!seen.insert(next).second) continue;
            const double score = node.score - logs[du][node.idx[du] - 1] +
                                 logs[du][node.idx[du]];
            heap.push({score, std::move(next)});
        }
    }
    return selected;
}

Eigen::MatrixXd hilbert_feature_rows(const Eigen::MatrixXd& inputs,
                                     const BasisConfig& cfg,
                                     const LambdaFactors& lf,
                                     const std::vector<MultiIndex>& bases) {
    const FeatureSet scaled = FeatureSet::build(inputs, cfg).scaled(lf);
    MatrixXd out(inputs.rows(), static_cast<Index>(bases.size()));
    for (std::size_t j = 0; j < bases.size(); ++j) {
        VectorXd column = scaled.factors[0].col(bases[j][0] - 1);
        for (Index d = 1; d < cfg.dims(); ++d) {
            column = column.cwiseProduct(
                scaled.factors[static_cast<std::size_t>(d)].col(
                    bases[j][static_cast<std::size_t>(d)] - 1));
        }
        out.col(static_cast<Index>(j)) = column;
    }
    return out;
}

HilbertPosterior hilbert_gp_fit(const Eigen::MatrixXd& train_inputs,
                                const Eigen::VectorXd& y,
                                const BasisConfig& cfg, const HyperParams& hp,
                                Index budget, Index budget_cap) {
    cfg.validate();
    hp.validate();
    if (budget > budget_cap) {
        throw Error(ErrorCode::size,
                    "basis budget " + std::to_string(budget) +
                        " exceeds the cap " + std::to_string(budget_cap));
    }
    const LambdaFactors lf = lambda_factors(cfg, hp);
    HilbertPosterior posterior;
    posterior.bases = select_dominant_bases(lf, budget);
    const MatrixXd phi =
        hilbert_feature_rows(train_inputs, cfg, lf, posterior.bases);
    auto [mean, cov] = posterior_core(phi, y, hp.sigma_y_sq);
    posterior.mean = std::move(mean);
    posterior.cov = std::move(cov);
    posterior.basis = cfg;
    posterior.lambda = lf;
    posterior.hyper = hp;
    return posterior;
}

Prediction hilbert_gp_predict(const HilbertPosterior& posterior,
                              const Eigen::MatrixXd& test_inputs,
                              bool add_noise_variance) {
    const MatrixXd phi_star = hilbert_feature_rows(
        test_inputs, posterior.basis, posterior.lambda, posterior.bases);
    Prediction out;
    out.mean = phi_star * posterior.mean;
    const MatrixXd half = phi_star * posterior.cov;
    out.variance = half.cwiseProduct(phi_star).rowwise().sum();
    clip_variances(out.variance);
    if (add_noise_variance) {
        out.variance.array() += posterior.hyper.sigma_y_sq;
    }
    return out;
}

Prediction hilbert_gp_predict(const Eigen::MatrixXd& train_inputs,
                              const Eigen::VectorXd& y,
                              const Eigen::MatrixXd& test_inputs,
                              const BasisConfig& cfg, const HyperParams& hp,
                              Index budget, Index budget_cap) {
    return hilbert_gp_predict(
        hilbert_gp_fit(train_inputs, y, cfg, hp, budget, budget_cap),
        test_inputs);
}

}  // namespace tngp
