#include "tngp/tensor_train.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <string>
#include <utility>

#include "tngp/rng.hpp"

namespace tngp {

using Eigen::MatrixXd;
using Eigen::VectorXd;

using RowMajorMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>;

Core3::Core3(Index left, Index mode, Index right)
    : left_(left), mode_(mode), right_(right) {
    if (left < 1 || mode < 1 || right < 1) {
        throw Error(ErrorCode::config, "core dimensions must be >= 1");
    }
    data_ = VectorXd::Zero(left * mode * right);
}

Eigen::MatrixXd Core3::left_unfolding() const {
    return RowMajorMap(data_.data(), left_ * mode_, right_);
}

Eigen::MatrixXd Core3::right_unfolding() const {
    return RowMajorMap(data_.data(), left_, mode_ * right_);
}

Eigen::MatrixXd Core3::mode_slice(Index m) const {
    MatrixXd slice(left_, right_);
    for (Index r = 0; r < left_; ++r) {
        for (Index s = 0; s < right_; ++s) {
            slice(r, s) = (*this)(r, m, s);
        }
    }
    return slice;
}

Core3 Core3::from_vec(const Eigen::VectorXd& v, Index left, Index mode,
                      Index right) {
    if (v.size() != left * mode * right) {
        throw Error(ErrorCode::config,
                    "core vector length " + std::to_string(v.size()) +
                        " does not match shape " + std::to_string(left) + "x" +
                        std::to_string(mode) + "x" + std::to_string(right));
    }
    Core3 core(left, mode, right);
    core.data_ = v;
    return core;
}

Core3 Core3::from_left_unfolding(const Eigen::MatrixXd& u, Index left,
                                 Index mode, Index right) {
    if (u.rows() != left * mode || u.cols() != right) {
        throw Error(ErrorCode::config, "left unfolding has wrong shape");
    }
    Core3 core(left, mode, right);
    for (Index row = 0; row < u.rows(); ++row) {
        core.data_.segment(row * right, right) = u.row(row);
    }
    return core;
}

Core3 Core3::from_right_unfolding(const Eigen::MatrixXd& u, Index left,
                                  Index mode, Index right) {
    if (u.rows() != left || u.cols() != mode * right) {
        throw Error(ErrorCode::config, "right unfolding has wrong shape");
    }
    Core3 core(left, mode, right);
    for (Index r = 0; r < left; ++r) {
        core.data_.segment(r * mode * right, mode * right) = u.row(r);
    }
    return core;
}

TensorTrain::TensorTrain(std::vector<Core3> cores,
                         std::optional<Index> canonical_site)
    : cores_(std::move(cores)), canonical_site_(canonical_site) {
    if (cores_.empty()) {
        throw Error(ErrorCode::config, "tensor train needs at least one core");
    }
    if (cores_.front().left() != 1 || cores_.back().right() != 1) {
        throw Error(ErrorCode::config, "boundary ranks must be 1");
    }
    for (std::size_t d = 0; d + 1 < cores_.size(); ++d) {
        if (cores_[d].right() != cores_[d + 1].left()) {
            throw Error(ErrorCode::config,
                        "rank chain mismatch between cores " +
                            std::to_string(d) + " and " + std::to_string(d + 1));
        }
    }
    if (canonical_site_ &&
        (*canonical_site_ < 0 || *canonical_site_ >= dims())) {
        throw Error(ErrorCode::config, "canonical site out of range");
    }
}

TensorTrain TensorTrain::random(const std::vector<Index>& modes,
                                const std::vector<Index>& ranks,
                                std::uint64_t seed) {
    const auto dims = static_cast<Index>(modes.size());
    if (dims < 1) {
        throw Error(ErrorCode::config, "tensor train needs at least one mode");
    }
    if (static_cast<Index>(ranks.size()) != dims + 1) {
        throw Error(ErrorCode::config,
                    "rank chain must have length dims + 1, got " +
                        std::to_string(ranks.size()));
    }
    if (ranks.front() != 1 || ranks.back() != 1) {
        throw Error(ErrorCode::config, "boundary ranks must be 1");
    }
    for (Index r : ranks) {
        if (r < 1) throw Error(ErrorCode::config, "ranks must be >= 1");
    }
    Rng rng(seed);
    std::vector<Core3> cores;
    cores.reserve(static_cast<std::size_t>(dims));
    for (Index d = 0; d < dims; ++d) {
        Core3 core(ranks[static_cast<std::size_t>(d)],
                   modes[static_cast<std::size_t>(d)],
                   ranks[static_cast<std::size_t>(d) + 1]);
        VectorXd values(core.size());
        for (Index i = 0; i < values.size(); ++i) values[i] = rng.normal();
        core = Core3::from_vec(values, core.left(), core.mode(), core.right());
        cores.push_back(std::move(core));
    }
    return TensorTrain(std::move(cores));
}

std::vector<Index> TensorTrain::modes() const {
    std::vector<Index> out;
    out.reserve(cores_.size());
    for (const auto& core : cores_) out.push_back(core.mode());
    return out;
}

std::vector<Index> TensorTrain::ranks() const {
    std::vector<Index> out;
    out.reserve(cores_.size() + 1);
    out.push_back(cores_.front().left());
    for (const auto& core : cores_) out.push_back(core.right());
    return out;
}

Index TensorTrain::subspace_size(Index d) const {
    const auto& core = cores_[static_cast<std::size_t>(d)];
    return core.left() * core.mode() * core.right();
}

TensorTrain TensorTrain::with_core(Index d, Core3 replacement) const {
    if (d < 0 || d >= dims()) {
        throw Error(ErrorCode::config, "core index out of range");
    }
    const auto& current = cores_[static_cast<std::size_t>(d)];
    if (replacement.left() != current.left() ||
        replacement.mode() != current.mode() ||
        replacement.right() != current.right()) {
        throw Error(ErrorCode::config, "replacement core has different shape");
    }
    std::vector<Core3> cores = cores_;
    cores[static_cast<std::size_t>(d)] = std::move(replacement);
    std::optional<Index> tag;
    if (canonical_site_ && *canonical_site_ == d) tag = d;
    return TensorTrain(std::move(cores), tag);
}

Eigen::VectorXd TensorTrain::contract_full(Index cap) const {
    detail::checked_product(modes(), cap, "contract_full");
    // grow the partial contraction left to right; rows are multi-indices
    // over the processed modes with dimension 1 slowest
    MatrixXd partial = cores_.front().left_unfolding();  // M_1 x R_2
    for (std::size_t d = 1; d < cores_.size(); ++d) {
        const Core3& core = cores_[d];
        const Index rows = partial.rows();
        const Index m_count = core.mode();
        MatrixXd next(rows * m_count, core.right());
        for (Index m = 0; m < m_count; ++m) {
            const MatrixXd block = partial * core.mode_slice(m);
            for (Index i = 0; i < rows; ++i) {
                next.row(i * m_count + m) = block.row(i);
            }
        }
        partial = std::move(next);
    }
    return VectorXd(partial.col(0));
}

TensorTrain TensorTrain::orthogonalized(Index site) const {
    if (site < 0 || site >= dims()) {
        throw Error(ErrorCode::config, "canonical site out of range");
    }
    std::vector<Core3> cores = cores_;
    for (Index d = 0; d < site; ++d) detail::shift_canonical_right(cores, d);
    for (Index d = dims() - 1; d > site; --d) {
        detail::shift_canonical_left(cores, d);
    }
    return TensorTrain(std::move(cores), site);
}

Eigen::MatrixXd TensorTrain::materialize_projection(Index site,
                                                    Index cap) const {
    if (site < 0 || site >= dims()) {
        throw Error(ErrorCode::config, "site out of range");
    }
    const auto mode_list = modes();
    const Index rows = detail::checked_product(mode_list, cap, "projection rows");
    const Index cols = subspace_size(site);
    if (rows > cap / std::max<Index>(cols, 1)) {
        throw Error(ErrorCode::size,
                    "projection matrix exceeds materialization cap");
    }

    // left interface: prod(M_k, k < site) x R_site
    MatrixXd left = MatrixXd::Ones(1, 1);
    for (Index d = 0; d < site; ++d) {
        const Core3& core = cores_[static_cast<std::size_t>(d)];
        MatrixXd next(left.rows() * core.mode(), core.right());
        for (Index m = 0; m < core.mode(); ++m) {
            const MatrixXd block = left * core.mode_slice(m);
            for (Index i = 0; i < left.rows(); ++i) {
                next.row(i * core.mode() + m) = block.row(i);
            }
        }
        left = std::move(next);
    }

    // right interface: R_{site+1} x prod(M_k, k > site)
    MatrixXd right = MatrixXd::Ones(1, 1);
    for (Index d = dims() - 1; d > site; --d) {
        const Core3& core = cores_[static_cast<std::size_t>(d)];
        MatrixXd next(core.left(), core.mode() * right.cols());
        for (Index m = 0; m < core.mode(); ++m) {
            next.middleCols(m * right.cols(), right.cols()) =
                core.mode_slice(m) * right;
        }
        right = std::move(next);
    }

    const Core3& center = cores_[static_cast<std::size_t>(site)];
    const Index m_count = center.mode();
    MatrixXd projection = MatrixXd::Zero(rows, cols);
    for (Index r = 0; r < center.left(); ++r) {
        for (Index m = 0; m < m_count; ++m) {
            for (Index s = 0; s < center.right(); ++s) {
                const Index col = (r * m_count + m) * center.right() + s;
                for (Index il = 0; il < left.rows(); ++il) {
                    const Index row_base =
                        (il * m_count + m) * right.cols();
                    projection.block(row_base, col, right.cols(), 1) =
                        left(il, r) * right.row(s).transpose();
                }
            }
        }
    }
    return projection;
}

TensorTrain tt_random(const BasisConfig& cfg, const std::vector<Index>& ranks,
                      std::uint64_t seed) {
    cfg.validate();
    return TensorTrain::random(cfg.m_per_dim, ranks, seed);
}

std::vector<Index> uniform_ranks(const std::vector<Index>& modes, Index r) {
    if (r < 1) throw Error(ErrorCode::config, "rank must be >= 1");
    const auto dims = static_cast<Index>(modes.size());
    std::vector<Index> ranks(static_cast<std::size_t>(dims) + 1, 1);
    // saturating cumulative mode products from each side
    std::vector<Index> left_prod(static_cast<std::size_t>(dims) + 1, 1);
    std::vector<Index> right_prod(static_cast<std::size_t>(dims) + 1, 1);
    const Index saturate = std::numeric_limits<Index>::max() / 2;
    for (Index d = 0; d < dims; ++d) {
        const Index prev = left_prod[static_cast<std::size_t>(d)];
        const Index m = modes[static_cast<std::size_t>(d)];
        left_prod[static_cast<std::size_t>(d) + 1] =
            prev > saturate / m ? saturate : prev * m;
    }
    for (Index d = dims - 1; d >= 0; --d) {
        const Index prev = right_prod[static_cast<std::size_t>(d) + 1];
        const Index m = modes[static_cast<std::size_t>(d)];
        right_prod[static_cast<std::size_t>(d)] =
            prev > saturate / m ? saturate : prev * m;
    }
    for (Index bond = 1; bond < dims; ++bond) {
        ranks[static_cast<std::size_t>(bond)] =
            std::min({r, left_prod[static_cast<std::size_t>(bond)],
                      right_prod[static_cast<std::size_t>(bond)]});
    }
    return ranks;
}

std::vector<Index> maximal_ranks(const std::vector<Index>& modes) {
    return uniform_ranks(modes, std::numeric_limits<Index>::max() / 4);
}

namespace detail {

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> thin_qr_nonneg(
    const Eigen::MatrixXd& a) {
    const Index k = std::min(a.rows(), a.cols());
    Eigen::HouseholderQR<MatrixXd> qr(a);
    MatrixXd q = qr.householderQ() * MatrixXd::Identity(a.rows(), k);
    MatrixXd r = qr.matrixQR()
                     .topRows(k)
                     .triangularView<Eigen::Upper>();
    for (Index i = 0; i < k; ++i) {
        if (r(i, i) < 0.0) {
            r.row(i) = -r.row(i);
            q.col(i) = -q.col(i);
        }
    }
    return {std::move(q), std::move(r)};
}

void shift_canonical_right(std::vector<Core3>& cores, Index d) {
    if (d < 0 || d + 1 >= static_cast<Index>(cores.size())) {
        throw Error(ErrorCode::config, "cannot shift canonical center right");
    }
    Core3& core = cores[static_cast<std::size_t>(d)];
    Core3& next = cores[static_cast<std::size_t>(d) + 1];
    auto [q, r] = thin_qr_nonneg(core.left_unfolding());
    const Index new_rank = q.cols();
    core = Core3::from_left_unfolding(q, core.left(), core.mode(), new_rank);
    next = Core3::from_right_unfolding(r * next.right_unfolding(), new_rank,
                                       next.mode(), next.right());
}

void shift_canonical_left(std::vector<Core3>& cores, Index d) {
    if (d <= 0 || d >= static_cast<Index>(cores.size())) {
        throw Error(ErrorCode::config, "cannot shift canonical center left");
    }
    Core3& core = cores[static_cast<std::size_t>(d)];
    Core3& prev = cores[static_cast<std::size_t>(d) - 1];
    auto [q, r] = thin_qr_nonneg(core.right_unfolding().transpose());
    const Index new_rank = q.cols();
    core = Core3::from_right_unfolding(q.transpose(), new_rank, core.mode(),
                                       core.right());
    prev = Core3::from_left_unfolding(prev.left_unfolding() * r.transpose(),
                                      prev.left(), prev.mode(), new_rank);
}

Index checked_product(const std::vector<Index>& modes, Index cap,
                      const char* what) {
    Index total = 1;
    for (Index m : modes) {
        if (m < 1) throw Error(ErrorCode::config, "modes must be >= 1");
        if (total > cap / m) {
            throw Error(ErrorCode::size,
                        std::string(what) + " exceeds materialization cap " +
                            std::to_string(cap));
        }
        total *= m;
    }
    return total;
}

}  // namespace detail

}  // namespace tngp
