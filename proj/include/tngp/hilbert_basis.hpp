#pragma once

#include <Eigen/Core>
#include <vector>

#include "tngp/errors.hpp"

namespace tngp {

using Index = Eigen::Index;

/// Squared-exponential kernel hyperparameters plus observation noise.
struct HyperParams {
    double sigma_f_sq{1.0};    // signal variance
    double length_scale{1.0};  // isotropic length scale
    double sigma_y_sq{0.1};    // noise variance

    void validate() const;
};

/// Basis layout on the hyperbox [-L_1,L_1] x ... x [-L_D,L_D]:
/// m_per_dim[d] sine eigenfunctions on a domain of half-width
/// half_widths[d], per dimension.
struct BasisConfig {
    std::vector<Index> m_per_dim;
    std::vector<double> half_widths;

    Index dims() const { return static_cast<Index>(m_per_dim.size()); }
    static BasisConfig uniform(Index dims, Index m, double half_width);
    void validate() const;

    /// Product of m_per_dim, throwing a size error above cap.
    Index total_bases_capped(Index cap) const;
};

/// Per-dimension spectral-density weights whose Kronecker product forms
/// the diagonal prior covariance over all multivariate basis functions.
struct LambdaFactors {
    std::vector<Eigen::VectorXd> diag_per_dim;

    Index dims() const { return static_cast<Index>(diag_per_dim.size()); }
};

/// m-th Dirichlet eigenfunction of the negative Laplacian on [-L, L]:
/// (1/sqrt(L)) sin(pi m (x + L) / (2L)). m is 1-based; x may lie outside
/// the interval (the sine is still evaluated).
double eigenfunction_value(double x, Index m, double half_width);

/// Matching eigenvalue (pi m / (2L))^2; strictly increasing in m.
double eigenvalue(Index m, double half_width);

/// Spectral density of the squared-exponential kernel evaluated at the
/// frequency whose squared magnitude is `lambda`:
/// sigma_f^2 sqrt(2 pi) l exp(-l^2 lambda / 2).
/// The argument is the Laplacian eigenvalue itself; the exponent already
/// accounts for the square root relating eigenvalues to frequencies.
double spectral_density(double lambda, const HyperParams& hp);

/// N x M_d matrix of eigenfunction values for dimension d (0-based):
/// entry (n, j) = eigenfunction_value(inputs(n, d), j + 1, L_d).
/// Feature matrices are only ever stored per dimension like this; the
/// full row-wise Kronecker matrix is never formed outside test oracles.
Eigen::MatrixXd feature_matrix(const Eigen::MatrixXd& inputs, Index d,
                               const BasisConfig& cfg);

/// Spectral densities of all eigenvalues, factored by dimension.
/// Entries are strictly positive and non-increasing within a dimension.
LambdaFactors lambda_factors(const BasisConfig& cfg, const HyperParams& hp);

}  // namespace tngp
