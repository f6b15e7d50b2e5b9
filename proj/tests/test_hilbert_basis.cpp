#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "tngp/hilbert_basis.hpp"
#include "tngp/rng.hpp"

using namespace tngp;
namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("eigenfunction pinned values") {
    CHECK(eigenfunction_value(-1.0, 3, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(eigenfunction_value(0.0, 1, 1.0) == doctest::Approx(1.0));
    CHECK(eigenfunction_value(0.5, 2, 1.0) == doctest::Approx(-1.0));
}

TEST_CASE("eigenfunction vanishes on the box boundary") {
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const double half_width = 0.5 + 3.0 * rng.uniform();
        for (Index m = 1; m <= 8; ++m) {
            CHECK(std::abs(eigenfunction_value(-half_width, m, half_width)) <
                  1e-12);
            CHECK(std::abs(eigenfunction_value(half_width, m, half_width)) <
                  1e-12);
        }
    }
}

TEST_CASE("eigenfunction domain errors") {
    CHECK_THROWS_AS(eigenfunction_value(0.0, 0, 1.0), Error);
    CHECK_THROWS_AS(eigenfunction_value(0.0, 1, 0.0), Error);
    CHECK_THROWS_AS(eigenfunction_value(0.0, 1, -2.0), Error);
}

TEST_CASE("eigenvalue pinned values") {
    CHECK(eigenvalue(1, kPi / 2.0) == doctest::Approx(1.0));
    CHECK(eigenvalue(2, 1.0) == doctest::Approx(kPi * kPi));
    // direct numeric evaluation of (3 pi / 4)^2
    const double expected = std::pow(3.0 * kPi / 4.0, 2.0);
    CHECK(eigenvalue(3, 2.0) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(eigenvalue(3, 2.0) == doctest::Approx(5.5517).epsilon(1e-4));
}

TEST_CASE("eigenvalue strictly increasing in m") {
    for (Index m = 1; m < 20; ++m) {
        CHECK(eigenvalue(m + 1, 0.7) > eigenvalue(m, 0.7));
    }
    CHECK_THROWS_AS(eigenvalue(0, 1.0), Error);
}

TEST_CASE("spectral density pinned values") {
    HyperParams hp{1.0, 1.0, 0.1};
    CHECK(spectral_density(0.0, hp) ==
          doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-14));
    CHECK(spectral_density(0.0, hp) == doctest::Approx(2.5066).epsilon(1e-4));

    HyperParams wide{2.0, 0.5, 0.1};
    CHECK(spectral_density(0.0, wide) ==
          doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-14));

    // numeric oracle sqrt(2 pi) e^{-1}
    const double expected = std::sqrt(2.0 * kPi) * std::exp(-1.0);
    CHECK(spectral_density(2.0, hp) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(spectral_density(2.0, hp) == doctest::Approx(0.9221).epsilon(1e-4));
}

TEST_CASE("spectral density decreasing and guarded") {
    HyperParams hp{1.3, 0.4, 0.1};
    double previous = spectral_density(0.0, hp);
    for (double lambda = 0.5; lambda < 10.0; lambda += 0.5) {
        const double value = spectral_density(lambda, hp);
        CHECK(value < previous);
        previous = value;
    }
    CHECK_THROWS_AS(spectral_density(-1e-9, hp), Error);
    CHECK_THROWS_AS(spectral_density(1.0, HyperParams{0.0, 1.0, 0.1}), Error);
}

TEST_CASE("feature matrix matches scalar eigenfunction calls") {
    BasisConfig cfg;
    cfg.m_per_dim = {2, 3};
    cfg.half_widths = {1.0, 2.0};

    Eigen::MatrixXd inputs(2, 2);
    inputs << -0.3, 0.4, 0.9, -1.5;
    for (Index d = 0; d < 2; ++d) {
        const Eigen::MatrixXd factor = feature_matrix(inputs, d, cfg);
        REQUIRE(factor.rows() == 2);
        REQUIRE(factor.cols() == cfg.m_per_dim[static_cast<std::size_t>(d)]);
        for (Index n = 0; n < 2; ++n) {
            for (Index j = 0; j < factor.cols(); ++j) {
                CHECK(factor(n, j) ==
                      doctest::Approx(eigenfunction_value(
                                          inputs(n, d), j + 1,
                                          cfg.half_widths[static_cast<std::size_t>(d)]))
                          .epsilon(1e-15));
            }
        }
    }
}

TEST_CASE("feature matrix edge rows and bounds") {
    BasisConfig cfg = BasisConfig::uniform(1, 4, 1.5);
    Eigen::MatrixXd at_boundary(1, 1);
    at_boundary << -1.5;
    CHECK(feature_matrix(at_boundary, 0, cfg).cwiseAbs().maxCoeff() < 1e-12);

    // |sin| <= 1 so every column norm is at most sqrt(N / L)
    BasisConfig wide = BasisConfig::uniform(1, 8, 0.8);
    Rng rng(3);
    Eigen::MatrixXd inputs = oracle::random_inputs(50, wide, rng);
    const Eigen::MatrixXd factor = feature_matrix(inputs, 0, wide);
    const double bound = std::sqrt(50.0 / 0.8);
    for (Index j = 0; j < factor.cols(); ++j) {
        CHECK(factor.col(j).norm() <= bound + 1e-12);
        CHECK(std::isfinite(factor.col(j).norm()));
    }

    CHECK_THROWS_AS(feature_matrix(inputs, 1, wide), Error);
    CHECK_THROWS_AS(feature_matrix(inputs, -1, wide), Error);
}

TEST_CASE("lambda factors compose the scalar oracles") {
    BasisConfig cfg = BasisConfig::uniform(1, 1, kPi / 2.0);
    HyperParams hp{1.0, 1.0, 0.1};
    const LambdaFactors lf = lambda_factors(cfg, hp);
    REQUIRE(lf.dims() == 1);
    REQUIRE(lf.diag_per_dim[0].size() == 1);
    // composition oracle: S(eigenvalue(1, pi/2)) = sqrt(2 pi) e^{-1/2}
    const double expected = std::sqrt(2.0 * kPi) * std::exp(-0.5);
    CHECK(lf.diag_per_dim[0][0] == doctest::Approx(expected).epsilon(1e-14));
    CHECK(lf.diag_per_dim[0][0] ==
          doctest::Approx(spectral_density(eigenvalue(1, kPi / 2.0), hp))
              .epsilon(1e-15));
    CHECK(lf.diag_per_dim[0][0] == doctest::Approx(1.5203).epsilon(1e-4));
}

TEST_CASE("lambda factors positive and non-increasing") {
    BasisConfig cfg;
    cfg.m_per_dim = {7, 5, 6};
    cfg.half_widths = {0.6, 2.2, 1.1};
    HyperParams hp{0.9, 0.35, 0.1};
    const LambdaFactors lf = lambda_factors(cfg, hp);
    for (Index d = 0; d < lf.dims(); ++d) {
        const auto& diag = lf.diag_per_dim[static_cast<std::size_t>(d)];
        for (Index j = 0; j < diag.size(); ++j) {
            CHECK(diag[j] > 0.0);
            if (j > 0) CHECK(diag[j] < diag[j - 1]);
        }
    }
}

TEST_CASE("lambda Kronecker diagonal equals pairwise products") {
    BasisConfig cfg = BasisConfig::uniform(2, 2, 1.0);
    HyperParams hp{1.0, 0.5, 0.1};
    const LambdaFactors lf = lambda_factors(cfg, hp);
    const Eigen::VectorXd dense = oracle::dense_lambda(lf);
    REQUIRE(dense.size() == 4);
    Index j = 0;
    for (Index a = 0; a < 2; ++a) {
        for (Index b = 0; b < 2; ++b) {
            CHECK(dense[j++] == doctest::Approx(lf.diag_per_dim[0][a] *
                                                lf.diag_per_dim[1][b])
                                    .epsilon(1e-15));
        }
    }
}

TEST_CASE("reduced-rank kernel approximation is tight in 1D") {
    BasisConfig cfg = BasisConfig::uniform(1, 64, 2.0);
    HyperParams hp{1.0, 0.3, 0.1};
    Rng rng(17);
    Eigen::MatrixXd inputs(100, 1);
    for (Index i = 0; i < 100; ++i) inputs(i, 0) = 2.0 * rng.uniform() - 1.0;

    const Eigen::MatrixXd phi = oracle::dense_phi(inputs, cfg);
    const Eigen::VectorXd lambda =
        oracle::dense_lambda(lambda_factors(cfg, hp));
    const Eigen::MatrixXd approx = phi * lambda.asDiagonal() * phi.transpose();
    const Eigen::MatrixXd exact = oracle::se_kernel(inputs, inputs, hp);
    CHECK(oracle::rel_frobenius(approx, exact) <= 1e-3);
}
