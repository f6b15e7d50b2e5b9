#include "tngp/hilbert_basis.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace tngp {

namespace {
constexpr double kPi = std::numbers::pi;
}

void HyperParams::validate() const {
    if (!(sigma_f_sq > 0.0) || !(length_scale > 0.0) || !(sigma_y_sq > 0.0)) {
        throw Error(ErrorCode::domain,
                    "hyperparameters must be strictly positive (sigma_f_sq=" +
                        std::to_string(sigma_f_sq) + ", length_scale=" +
                        std::to_string(length_scale) + ", sigma_y_sq=" +
                        std::to_string(sigma_y_sq) + ")");
    }
}

BasisConfig BasisConfig::uniform(Index dims, Index m, double half_width) {
    BasisConfig cfg;
    cfg.m_per_dim.assign(static_cast<std::size_t>(dims), m);
    cfg.half_widths.assign(static_cast<std::size_t>(dims), half_width);
    cfg.validate();
    return cfg;
}

void BasisConfig::validate() const {
    if (m_per_dim.empty()) {
        throw Error(ErrorCode::config, "basis config has no dimensions");
    }
    if (m_per_dim.size() != half_widths.size()) {
        throw Error(ErrorCode::config,
                    "m_per_dim and half_widths lengths differ (" +
                        std::to_string(m_per_dim.size()) + " vs " +
                        std::to_string(half_widths.size()) + ")");
    }
    for (std::size_t d = 0; d < m_per_dim.size(); ++d) {
        if (m_per_dim[d] < 1) {
            throw Error(ErrorCode::config, "m_per_dim[" + std::to_string(d) +
                                               "] must be >= 1");
        }
        if (!(half_widths[d] > 0.0)) {
            throw Error(ErrorCode::config, "half_widths[" + std::to_string(d) +
                                               "] must be > 0");
        }
    }
}

Index BasisConfig::total_bases_capped(Index cap) const {
    Index total = 1;
    for (Index m : m_per_dim) {
        if (total > cap / m) {
            throw Error(ErrorCode::size,
                        "total basis count exceeds cap " + std::to_string(cap));
        }
        total *= m;
    }
    return total;
}

double eigenfunction_value(double x, Index m, double half_width) {
    if (!(half_width > 0.0)) {
        throw Error(ErrorCode::domain, "half-width must be > 0");
    }
    if (m < 1) {
        throw Error(ErrorCode::domain, "basis index must be >= 1");
    }
    return std::sin(kPi * static_cast<double>(m) * (x + half_width) /
                    (2.0 * half_width)) /
           std::sqrt(half_width);
}

double eigenvalue(Index m, double half_width) {
    if (!(half_width > 0.0)) {
        throw Error(ErrorCode::domain, "half-width must be > 0");
    }
    if (m < 1) {
        throw Error(ErrorCode::domain, "basis index must be >= 1");
    }
    const double w = kPi * static_cast<double>(m) / (2.0 * half_width);
    return w * w;
}

double spectral_density(double lambda, const HyperParams& hp) {
    hp.validate();
    if (lambda < 0.0) {
        throw Error(ErrorCode::domain, "eigenvalue must be >= 0");
    }
    const double l = hp.length_scale;
    return hp.sigma_f_sq * std::sqrt(2.0 * kPi) * l *
           std::exp(-0.5 * l * l * lambda);
}

Eigen::MatrixXd feature_matrix(const Eigen::MatrixXd& inputs, Index d,
                               const BasisConfig& cfg) {
    cfg.validate();
    if (d < 0 || d >= cfg.dims()) {
        throw Error(ErrorCode::domain,
                    "dimension index " + std::to_string(d) + " out of range [0, " +
                        std::to_string(cfg.dims()) + ")");
    }
    if (inputs.cols() != cfg.dims()) {
        throw Error(ErrorCode::config,
                    "inputs have " + std::to_string(inputs.cols()) +
                        " columns, basis config has " +
                        std::to_string(cfg.dims()) + " dimensions");
    }
    const double L = cfg.half_widths[static_cast<std::size_t>(d)];
    const Index m_count = cfg.m_per_dim[static_cast<std::size_t>(d)];
    const double inv_sqrt_l = 1.0 / std::sqrt(L);

    // phase(n) = pi (x + L) / (2L); column j is sin((j+1) phase) / sqrt(L)
    Eigen::ArrayXd phase =
        (inputs.col(d).array() + L) * (kPi / (2.0 * L));
    Eigen::MatrixXd out(inputs.rows(), m_count);
    for (Index j = 0; j < m_count; ++j) {
        out.col(j) = (phase * static_cast<double>(j + 1)).sin() * inv_sqrt_l;
    }
    return out;
}

LambdaFactors lambda_factors(const BasisConfig& cfg, const HyperParams& hp) {
    cfg.validate();
    hp.validate();
    LambdaFactors lf;
    lf.diag_per_dim.reserve(cfg.m_per_dim.size());
    for (Index d = 0; d < cfg.dims(); ++d) {
        const Index m_count = cfg.m_per_dim[static_cast<std::size_t>(d)];
        Eigen::VectorXd diag(m_count);
        for (Index j = 0; j < m_count; ++j) {
            double value = spectral_density(
                eigenvalue(j + 1, cfg.half_widths[static_cast<std::size_t>(d)]),
                hp);
            // keep the strict-positivity invariant if exp underflows
            if (value <= 0.0) value = std::numeric_limits<double>::min();
            diag[j] = value;
        }
        lf.diag_per_dim.push_back(std::move(diag));
    }
    return lf;
}

}  // namespace tngp
