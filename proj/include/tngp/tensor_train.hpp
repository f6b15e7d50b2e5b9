#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "tngp/errors.hpp"
#include "tngp/hilbert_basis.hpp"

namespace tngp {

/// Entry cap for test-only dense materializations (contract_full,
/// materialize_projection, covariance assembly).
inline constexpr Index kDefaultMaterializeCap = 1'000'000;

/// Three-way tensor of shape left x mode x right, stored contiguously
/// with the left rank slowest and the right rank fastest. The same
/// ordering defines vec(): index (r, m, s) -> (r * mode + m) * right + s.
class Core3 {
public:
    Core3() = default;
    Core3(Index left, Index mode, Index right);

    Index left() const { return left_; }
    Index mode() const { return mode_; }
    Index right() const { return right_; }
    Index size() const { return static_cast<Index>(data_.size()); }

    double operator()(Index r, Index m, Index s) const {
        return data_[(r * mode_ + m) * right_ + s];
    }
    double& operator()(Index r, Index m, Index s) {
        return data_[(r * mode_ + m) * right_ + s];
    }

    /// (left * mode) x right matrix; row index r * mode + m.
    Eigen::MatrixXd left_unfolding() const;
    /// left x (mode * right) matrix; column index m * right + s.
    Eigen::MatrixXd right_unfolding() const;
    /// left x right slice at fixed mode index m.
    Eigen::MatrixXd mode_slice(Index m) const;

    const Eigen::VectorXd& vec() const { return data_; }

    static Core3 from_vec(const Eigen::VectorXd& v, Index left, Index mode,
                          Index right);
    static Core3 from_left_unfolding(const Eigen::MatrixXd& u, Index left,
                                     Index mode, Index right);
    static Core3 from_right_unfolding(const Eigen::MatrixXd& u, Index left,
                                      Index mode, Index right);

private:
    Index left_{0}, mode_{0}, right_{0};
    Eigen::VectorXd data_;
};

/// Tensor train representing a vector of length prod(M_d) through D
/// chained cores of shape R_d x M_d x R_{d+1}, with R_1 = R_{D+1} = 1.
/// The represented vector is indexed with dimension 1 slowest, matching
/// the Kronecker order of the row-wise feature products.
///
/// Values are immutable; operations return new trains.
class TensorTrain {
public:
    TensorTrain() = default;
    explicit TensorTrain(std::vector<Core3> cores,
                         std::optional<Index> canonical_site = std::nullopt);

    /// Standard-normal cores from the given seed; deterministic per seed.
    static TensorTrain random(const std::vector<Index>& modes,
                              const std::vector<Index>& ranks,
                              std::uint64_t seed);

    Index dims() const { return static_cast<Index>(cores_.size()); }
    Index mode(Index d) const { return cores_[static_cast<std::size_t>(d)].mode(); }
    std::vector<Index> modes() const;
    /// Boundary ranks R_1..R_{D+1} as a vector of length dims()+1.
    std::vector<Index> ranks() const;
    const Core3& core(Index d) const { return cores_[static_cast<std::size_t>(d)]; }
    std::optional<Index> canonical_site() const { return canonical_site_; }

    /// R_d * M_d * R_{d+1}, the length of vec(core d).
    Index subspace_size(Index d) const;

    /// Replaces core d with one of identical shape. The canonical tag is
    /// kept only when d is the canonical site (the projection formed by
    /// the other cores is untouched).
    TensorTrain with_core(Index d, Core3 replacement) const;

    /// Dense vector of length prod(M_d); guarded by the entry cap.
    Eigen::VectorXd contract_full(Index cap = kDefaultMaterializeCap) const;

    /// Site-d-mixed canonical form: cores left of d left-orthogonal, cores
    /// right of d right-orthogonal, via thin QR factorizations with
    /// nonnegative triangular diagonals. The represented vector is
    /// unchanged; ranks may shrink when an unfolding is wide.
    TensorTrain orthogonalized(Index site) const;

    /// Dense prod(M_d) x (R_d M_d R_{d+1}) projection built from all cores
    /// except d, such that contract_full() == projection * vec(core d).
    /// Testing oracle; guarded by the entry cap.
    Eigen::MatrixXd materialize_projection(Index site,
                                           Index cap = kDefaultMaterializeCap) const;

private:
    std::vector<Core3> cores_;
    std::optional<Index> canonical_site_;
};

/// Random train shaped by the basis config (modes = m_per_dim).
TensorTrain tt_random(const BasisConfig& cfg, const std::vector<Index>& ranks,
                      std::uint64_t seed);

/// Rank chain min(r, feasible) per bond; feasible means no larger than
/// the unfolding sizes on either side of the bond.
std::vector<Index> uniform_ranks(const std::vector<Index>& modes, Index r);

/// Largest feasible rank chain for the given modes.
std::vector<Index> maximal_ranks(const std::vector<Index>& modes);

namespace detail {

/// Thin QR with sign convention diag(R) >= 0.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> thin_qr_nonneg(
    const Eigen::MatrixXd& a);

/// Left-orthogonalizes core d in place and absorbs the triangular factor
/// into core d+1. Moves a site-d canonical center to d+1.
void shift_canonical_right(std::vector<Core3>& cores, Index d);

/// Right-orthogonalizes core d in place and absorbs the factor into core
/// d-1. Moves a site-d canonical center to d-1.
void shift_canonical_left(std::vector<Core3>& cores, Index d);

/// Product of modes, or a size error mentioning `what` when above cap.
Index checked_product(const std::vector<Index>& modes, Index cap,
                      const char* what);

}  // namespace detail

}  // namespace tngp
