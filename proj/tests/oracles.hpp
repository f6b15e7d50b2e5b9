#pragma once

// Dense reference implementations for tests. Everything here is written
// straight from the defining formulas (nested sums, explicit Kronecker
// products, explicit inverses) and stays independent of the library's
// structured computation paths.

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "tngp/hilbert_basis.hpp"
#include "tngp/rng.hpp"
#include "tngp/tensor_train.hpp"

namespace oracle {

using tngp::Index;

/// Row-wise Kronecker feature matrix built cell by cell from scalar
/// eigenfunction calls; dimension 1 slowest in the column index.
inline Eigen::MatrixXd dense_phi(const Eigen::MatrixXd& inputs,
                                 const tngp::BasisConfig& cfg) {
    const Index dims = cfg.dims();
    Index total = 1;
    for (Index m : cfg.m_per_dim) total *= m;
    Eigen::MatrixXd phi(inputs.rows(), total);
    for (Index n = 0; n < inputs.rows(); ++n) {
        for (Index j = 0; j < total; ++j) {
            Index rest = j;
            double value = 1.0;
            for (Index d = dims - 1; d >= 0; --d) {
                const Index m_d = cfg.m_per_dim[static_cast<std::size_t>(d)];
                const Index m = rest % m_d;
                rest /= m_d;
                value *= tngp::eigenfunction_value(
                    inputs(n, d), m + 1,
                    cfg.half_widths[static_cast<std::size_t>(d)]);
            }
            phi(n, j) = value;
        }
    }
    return phi;
}

/// Kronecker diagonal of the spectral weights, same ordering as dense_phi.
inline Eigen::VectorXd dense_lambda(const tngp::LambdaFactors& lf) {
    const Index dims = lf.dims();
    Index total = 1;
    for (const auto& diag : lf.diag_per_dim) {
        total *= static_cast<Index>(diag.size());
    }
    Eigen::VectorXd out(total);
    for (Index j = 0; j < total; ++j) {
        Index rest = j;
        double value = 1.0;
        for (Index d = dims - 1; d >= 0; --d) {
            const auto& diag = lf.diag_per_dim[static_cast<std::size_t>(d)];
            value *= diag[rest % diag.size()];
            rest /= diag.size();
        }
        out[j] = value;
    }
    return out;
}

/// One element of the represented tensor by brute force: the full sum
/// over every rank tuple of the product of core entries.
inline double naive_tt_element(const tngp::TensorTrain& tt,
                               const std::vector<Index>& idx) {
    const Index dims = tt.dims();
    const auto ranks = tt.ranks();
    std::vector<Index> r(static_cast<std::size_t>(dims) + 1, 0);
    double total = 0.0;
    while (true) {
        double prod = 1.0;
        for (Index d = 0; d < dims; ++d) {
            prod *= tt.core(d)(r[static_cast<std::size_t>(d)],
                               idx[static_cast<std::size_t>(d)],
                               r[static_cast<std::size_t>(d) + 1]);
        }
        total += prod;
        std::size_t pos = 0;
        while (pos <= static_cast<std::size_t>(dims)) {
            if (++r[pos] < ranks[pos]) break;
            r[pos] = 0;
            ++pos;
        }
        if (pos > static_cast<std::size_t>(dims)) break;
    }
    return total;
}

/// Full represented vector via naive_tt_element, dimension 1 slowest.
inline Eigen::VectorXd naive_tt_contract(const tngp::TensorTrain& tt) {
    const Index dims = tt.dims();
    Index total = 1;
    for (Index d = 0; d < dims; ++d) total *= tt.mode(d);
    Eigen::VectorXd out(total);
    std::vector<Index> idx(static_cast<std::size_t>(dims));
    for (Index j = 0; j < total; ++j) {
        Index rest = j;
        for (Index d = dims - 1; d >= 0; --d) {
            idx[static_cast<std::size_t>(d)] = rest % tt.mode(d);
            rest /= tt.mode(d);
        }
        out[j] = naive_tt_element(tt, idx);
    }
    return out;
}

/// Projection matrix column by column: column j is the naive contraction
/// of the train with core `site` replaced by the j-th unit vector.
inline Eigen::MatrixXd naive_projection(const tngp::TensorTrain& tt,
                                        Index site) {
    const tngp::Core3& center = tt.core(site);
    const Index k = center.size();
    Eigen::MatrixXd w;
    for (Index j = 0; j < k; ++j) {
        Eigen::VectorXd unit = Eigen::VectorXd::Zero(k);
        unit[j] = 1.0;
        const auto column = naive_tt_contract(tt.with_core(
            site, tngp::Core3::from_vec(unit, center.left(), center.mode(),
                                        center.right())));
        if (w.size() == 0) w.resize(column.size(), k);
        w.col(j) = column;
    }
    return w;
}

/// Squared-exponential kernel matrix, entry by entry.
inline Eigen::MatrixXd se_kernel(const Eigen::MatrixXd& a,
                                 const Eigen::MatrixXd& b,
                                 const tngp::HyperParams& hp) {
    Eigen::MatrixXd out(a.rows(), b.rows());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < b.rows(); ++j) {
            const double d2 = (a.row(i) - b.row(j)).squaredNorm();
            out(i, j) = hp.sigma_f_sq *
                        std::exp(-d2 / (2.0 * hp.length_scale *
                                        hp.length_scale));
        }
    }
    return out;
}

/// Textbook Bayesian linear regression under the unit prior, via an
/// explicit inverse.
inline std::pair<Eigen::VectorXd, Eigen::MatrixXd> dense_blr(
    const Eigen::MatrixXd& a, const Eigen::VectorXd& y, double sigma_y_sq) {
    const Index k = a.cols();
    const Eigen::MatrixXd prec =
        a.transpose() * a + sigma_y_sq * Eigen::MatrixXd::Identity(k, k);
    const Eigen::MatrixXd cov = sigma_y_sq * prec.inverse();
    const Eigen::VectorXd mean = cov * (a.transpose() * y) / sigma_y_sq;
    return {mean, cov};
}

/// Ridge solution via an explicit inverse.
inline Eigen::VectorXd dense_ridge(const Eigen::MatrixXd& a,
                                   const Eigen::VectorXd& y, double lambda) {
    const Index k = a.cols();
    return (a.transpose() * a + lambda * Eigen::MatrixXd::Identity(k, k))
        .inverse() *
        (a.transpose() * y);
}

/// Uniformly random inputs inside the hyperbox.
inline Eigen::MatrixXd random_inputs(Index n, const tngp::BasisConfig& cfg,
                                     tngp::Rng& rng) {
    Eigen::MatrixXd inputs(n, cfg.dims());
    for (Index i = 0; i < n; ++i) {
        for (Index d = 0; d < cfg.dims(); ++d) {
            inputs(i, d) = (2.0 * rng.uniform() - 1.0) *
                           cfg.half_widths[static_cast<std::size_t>(d)];
        }
    }
    return inputs;
}

inline double rel_frobenius(const Eigen::MatrixXd& got,
                            const Eigen::MatrixXd& want) {
    return (got - want).norm() / std::max(want.norm(), 1e-300);
}

}  // namespace oracle
