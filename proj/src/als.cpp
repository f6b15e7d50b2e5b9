#include "tngp/als.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tngp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void AlsConfig::validate() const {
    if (max_sweeps < 1) {
        throw Error(ErrorCode::config, "max_sweeps must be >= 1");
    }
    if (!(rel_tol >= 0.0)) {
        throw Error(ErrorCode::config, "rel_tol must be >= 0");
    }
    if (reg_lambda && !(*reg_lambda >= 0.0)) {
        throw Error(ErrorCode::config, "reg_lambda must be >= 0");
    }
}

Eigen::VectorXd core_update(const Eigen::MatrixXd& a, const Eigen::VectorXd& y,
                            double reg_lambda) {
    if (!(reg_lambda >= 0.0)) {
        throw Error(ErrorCode::config, "reg_lambda must be >= 0");
    }
    auto [gram, moment] = gram_and_moment(a, y);
    const Index k = gram.rows();
    if (reg_lambda > 0.0) {
        gram.diagonal().array() += reg_lambda;
    }
    Eigen::LDLT<MatrixXd> ldlt(gram);
    if (reg_lambda == 0.0 &&
        (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
         ldlt.rcond() < 1e-12)) {
        warn("unregularized normal matrix is numerically singular "
             "(rcond < 1e-12); using the minimum-norm solution");
        return a.completeOrthogonalDecomposition().solve(y);
    }
    if (ldlt.info() != Eigen::Success) {
        throw Error(ErrorCode::numeric,
                    "LDLT factorization failed in core update (k=" +
                        std::to_string(k) + ")");
    }
    return ldlt.solve(moment);
}

bool converged(const std::vector<double>& sweep_trace, double rel_tol) {
    if (sweep_trace.size() < 2) return false;
    const double last = sweep_trace.back();
    const double prev = sweep_trace[sweep_trace.size() - 2];
    if (last == prev) return true;
    const double denom =
        std::max(std::abs(prev), std::numeric_limits<double>::min());
    return std::abs(last - prev) / denom < rel_tol;
}

namespace {

struct Sweeper {
    const FeatureSet& scaled;
    const VectorXd& y;
    double reg;
    std::vector<Core3>& cores;
    // left_ifc[d]: N x R_d interfaces from cores [0, d);
    // right_ifc[d]: N x R_{d+1} interfaces from cores (d, D)
    std::vector<MatrixXd> left_ifc;
    std::vector<MatrixXd> right_ifc;
    FitTrace trace;
    const AlsInspector& inspect;

    Sweeper(const FeatureSet& scaled_features, const VectorXd& targets,
            double reg_lambda, std::vector<Core3>& core_storage,
            const AlsInspector& inspector)
        : scaled(scaled_features),
          y(targets),
          reg(reg_lambda),
          cores(core_storage),
          inspect(inspector) {
        const auto dims = static_cast<Index>(cores.size());
        const Index n = scaled.n();
        left_ifc.assign(static_cast<std::size_t>(dims), MatrixXd());
        right_ifc.assign(static_cast<std::size_t>(dims), MatrixXd());
        left_ifc[0] = MatrixXd::Ones(n, 1);
        right_ifc[static_cast<std::size_t>(dims) - 1] = MatrixXd::Ones(n, 1);
        for (Index d = dims - 2; d >= 0; --d) {
            right_ifc[static_cast<std::size_t>(d)] = detail::interface_step_right(
                right_ifc[static_cast<std::size_t>(d) + 1],
                scaled.factors[static_cast<std::size_t>(d) + 1],
                cores[static_cast<std::size_t>(d) + 1]);
        }
    }

    void update_core(Index d) {
        if (inspect) inspect(TensorTrain(cores, d), d);
        const Core3& core = cores[static_cast<std::size_t>(d)];
        const MatrixXd a = detail::assemble_projected(
            left_ifc[static_cast<std::size_t>(d)],
            scaled.factors[static_cast<std::size_t>(d)],
            right_ifc[static_cast<std::size_t>(d)]);
        const VectorXd w = core_update(a, y, reg);
        cores[static_cast<std::size_t>(d)] =
            Core3::from_vec(w, core.left(), core.mode(), core.right());
        const double objective =
            (y - a * w).squaredNorm() + reg * w.squaredNorm();
        trace.per_update.push_back(objective);
    }

    void sweep() {
        const auto dims = static_cast<Index>(cores.size());
        for (Index d = 0; d < dims; ++d) {
            update_core(d);
            if (d + 1 < dims) {
                detail::shift_canonical_right(cores, d);
                left_ifc[static_cast<std::size_t>(d) + 1] =
                    detail::interface_step_left(
                        left_ifc[static_cast<std::size_t>(d)],
                        scaled.factors[static_cast<std::size_t>(d)],
                        cores[static_cast<std::size_t>(d)]);
            }
        }
        for (Index d = dims - 1; d >= 0; --d) {
            update_core(d);
            if (d > 0) {
                detail::shift_canonical_left(cores, d);
                right_ifc[static_cast<std::size_t>(d) - 1] =
                    detail::interface_step_right(
                        right_ifc[static_cast<std::size_t>(d)],
                        scaled.factors[static_cast<std::size_t>(d)],
                        cores[static_cast<std::size_t>(d)]);
            }
        }
        trace.per_sweep.push_back(trace.per_update.back());
        ++trace.sweeps;
    }
};

}  // namespace

AlsResult als_fit(const FeatureSet& fs, const LambdaFactors& lf,
                  const Eigen::VectorXd& y, const std::vector<Index>& ranks,
                  const AlsConfig& cfg, Index site,
                  const AlsInspector& inspect) {
    cfg.validate();
    fs.validate();
    if (!cfg.reg_lambda) {
        throw Error(ErrorCode::config,
                    "reg_lambda is unset; pass one explicitly (the GP layer "
                    "defaults it to sigma_y_sq)");
    }
    const double reg = *cfg.reg_lambda;
    if (fs.n() != y.size()) {
        throw Error(ErrorCode::config, "target length does not match rows");
    }
    if (fs.n() < 1) {
        throw Error(ErrorCode::config, "fit needs at least one data point");
    }
    if (site < 0 || site >= fs.dims()) {
        throw Error(ErrorCode::config, "site out of range");
    }

    std::vector<Index> modes;
    modes.reserve(fs.factors.size());
    for (const auto& factor : fs.factors) modes.push_back(factor.cols());

    TensorTrain init = TensorTrain::random(modes, ranks, cfg.seed)
                           .orthogonalized(0);
    std::vector<Core3> cores;
    cores.reserve(static_cast<std::size_t>(init.dims()));
    for (Index d = 0; d < init.dims(); ++d) cores.push_back(init.core(d));

    if (reg == 0.0) {
        Index max_subspace = 0;
        for (Index d = 0; d < init.dims(); ++d) {
            max_subspace = std::max(max_subspace, init.subspace_size(d));
        }
        if (fs.n() < max_subspace) {
            throw Error(ErrorCode::config,
                        "reg_lambda = 0 with fewer data points (" +
                            std::to_string(fs.n()) +
                            ") than the largest core subspace (" +
                            std::to_string(max_subspace) +
                            "); set reg_lambda > 0");
        }
    }

    const FeatureSet scaled = fs.scaled(lf);
    Sweeper sweeper(scaled, y, reg, cores, inspect);
    for (int s = 0; s < cfg.max_sweeps; ++s) {
        sweeper.sweep();
        if (converged(sweeper.trace.per_sweep, cfg.rel_tol)) {
            sweeper.trace.converged = true;
            break;
        }
    }

    // backward sweeps end at site 0; walk the center to the Bayesian site
    for (Index d = 0; d < site; ++d) detail::shift_canonical_right(cores, d);
    return {TensorTrain(std::move(cores), site), std::move(sweeper.trace)};
}

}  // namespace tngp
