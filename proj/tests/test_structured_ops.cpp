#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>

#include "oracles.hpp"
#include "tngp/metrics.hpp"
#include "tngp/structured_ops.hpp"

using namespace tngp;

namespace {

struct Instance {
    BasisConfig cfg;
    HyperParams hp{1.0, 0.4, 0.1};
    LambdaFactors lf;
    Eigen::MatrixXd inputs;
    TensorTrain tt;
    Index site;
};

Instance random_instance(Rng& rng, Index dims, Index m, Index rank, Index n,
                         bool orthogonalize) {
    Instance inst;
    inst.cfg = BasisConfig::uniform(dims, m, 1.0 + rng.uniform());
    inst.lf = lambda_factors(inst.cfg, inst.hp);
    inst.inputs = oracle::random_inputs(n, inst.cfg, rng);
    inst.site = static_cast<Index>(rng.next_u64() % dims);
    inst.tt = TensorTrain::random(inst.cfg.m_per_dim,
                                  uniform_ranks(inst.cfg.m_per_dim, rank),
                                  rng.next_u64());
    if (orthogonalize) inst.tt = inst.tt.orthogonalized(inst.site);
    return inst;
}

Eigen::MatrixXd dense_projected(const Instance& inst) {
    const Eigen::MatrixXd phi = oracle::dense_phi(inst.inputs, inst.cfg);
    const Eigen::VectorXd lambda = oracle::dense_lambda(inst.lf);
    const Eigen::MatrixXd w = oracle::naive_projection(inst.tt, inst.site);
    return phi * lambda.cwiseSqrt().asDiagonal() * w;
}

}  // namespace

TEST_CASE("project_features in 1D is the scaled factor") {
    Rng rng(2);
    const BasisConfig cfg = BasisConfig::uniform(1, 5, 1.2);
    const HyperParams hp{1.0, 0.5, 0.1};
    const LambdaFactors lf = lambda_factors(cfg, hp);
    const Eigen::MatrixXd inputs = oracle::random_inputs(9, cfg, rng);
    const TensorTrain tt = TensorTrain::random({5}, {1, 1}, 3);

    const FeatureSet fs = FeatureSet::build(inputs, cfg);
    const Eigen::MatrixXd a = project_features(fs, lf, tt, 0);
    const Eigen::MatrixXd expected =
        fs.factors[0] * lf.diag_per_dim[0].cwiseSqrt().asDiagonal();
    CHECK(oracle::rel_frobenius(a, expected) < 1e-14);
}

TEST_CASE("project_features matches the dense construction") {
    Rng rng(5);
    SUBCASE("2D") {
        Instance inst = random_instance(rng, 2, 3, 2, 20, true);
        const Eigen::MatrixXd a = project_features(
            FeatureSet::build(inst.inputs, inst.cfg), inst.lf, inst.tt,
            inst.site);
        CHECK(oracle::rel_frobenius(a, dense_projected(inst)) < 1e-10);
    }
    SUBCASE("3D shape and value") {
        Instance inst = random_instance(rng, 3, 4, 2, 50, true);
        inst.site = 1;
        inst.tt = inst.tt.orthogonalized(1);
        const Eigen::MatrixXd a = project_features(
            FeatureSet::build(inst.inputs, inst.cfg), inst.lf, inst.tt, 1);
        CHECK(a.rows() == 50);
        CHECK(a.cols() == inst.tt.subspace_size(1));
        CHECK(oracle::rel_frobenius(a, dense_projected(inst)) < 1e-10);
    }
    SUBCASE("non-canonical trains are fine too") {
        Instance inst = random_instance(rng, 3, 3, 2, 15, false);
        const Eigen::MatrixXd a = project_features(
            FeatureSet::build(inst.inputs, inst.cfg), inst.lf, inst.tt,
            inst.site);
        CHECK(oracle::rel_frobenius(a, dense_projected(inst)) < 1e-10);
    }
}

TEST_CASE("project_features oracle sweep over random instances") {
    Rng rng(6);
    for (int trial = 0; trial < 15; ++trial) {
        const Index dims = 2 + static_cast<Index>(rng.next_u64() % 3);
        const Index m = 2 + static_cast<Index>(rng.next_u64() % 4);
        const Index rank = 1 + static_cast<Index>(rng.next_u64() % 3);
        const Index n = 4 + static_cast<Index>(rng.next_u64() % 61);
        Instance inst = random_instance(rng, dims, m, rank, n, true);
        const Eigen::MatrixXd a = project_features(
            FeatureSet::build(inst.inputs, inst.cfg), inst.lf, inst.tt,
            inst.site);
        CHECK(oracle::rel_frobenius(a, dense_projected(inst)) < 1e-10);
    }
}

TEST_CASE("project_test_rows agrees with project_features") {
    Rng rng(8);
    Instance inst = random_instance(rng, 2, 4, 2, 12, true);
    const FeatureSet fs = FeatureSet::build(inst.inputs, inst.cfg);
    const Eigen::MatrixXd from_train =
        project_features(fs, inst.lf, inst.tt, inst.site);
    const Eigen::MatrixXd from_test = project_test_rows(
        inst.inputs, inst.cfg, inst.lf, inst.tt, inst.site);
    CHECK(oracle::rel_frobenius(from_test, from_train) < 1e-14);

    Eigen::MatrixXd one_point = inst.inputs.topRows(1);
    const Eigen::MatrixXd row = project_test_rows(one_point, inst.cfg, inst.lf,
                                                  inst.tt, inst.site);
    CHECK(row.rows() == 1);
    CHECK(row.cols() == inst.tt.subspace_size(inst.site));
}

TEST_CASE("orthogonality transfers through the projection, not the features") {
    Rng rng(9);
    Instance inst = random_instance(rng, 3, 3, 2, 10, true);
    // with unit spectral weights the projection gram is the identity
    const Eigen::MatrixXd w =
        inst.tt.materialize_projection(inst.site);
    CHECK((w.transpose() * w -
           Eigen::MatrixXd::Identity(w.cols(), w.cols()))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
}

TEST_CASE("gram_and_moment basics") {
    Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(4, 4);
    Eigen::VectorXd y(4);
    y << 1.0, -2.0, 0.5, 3.0;
    auto [gram, moment] = gram_and_moment(identity, y);
    CHECK(gram.isApprox(identity, 1e-15));
    CHECK(moment.isApprox(y, 1e-15));

    auto [gram_zero, moment_zero] =
        gram_and_moment(Eigen::MatrixXd::Random(6, 3),
                        Eigen::VectorXd::Zero(6));
    CHECK(moment_zero.cwiseAbs().maxCoeff() == 0.0);
    CHECK(gram_zero.isApprox(gram_zero.transpose(), 1e-15));
}

TEST_CASE("gram_and_moment matches the naive double loop") {
    Rng rng(10);
    Eigen::MatrixXd a(50, 8);
    Eigen::VectorXd y(50);
    for (Index i = 0; i < 50; ++i) {
        y[i] = rng.normal();
        for (Index j = 0; j < 8; ++j) a(i, j) = rng.normal();
    }
    auto [gram, moment] = gram_and_moment(a, y);
    for (Index p = 0; p < 8; ++p) {
        double mom = 0.0;
        for (Index i = 0; i < 50; ++i) mom += a(i, p) * y[i];
        CHECK(moment[p] == doctest::Approx(mom).epsilon(1e-12));
        for (Index q = 0; q < 8; ++q) {
            double cell = 0.0;
            for (Index i = 0; i < 50; ++i) cell += a(i, p) * a(i, q);
            CHECK(gram(p, q) == doctest::Approx(cell).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(gram_and_moment(a, Eigen::VectorXd::Zero(49)), Error);
}

TEST_CASE("project_features wall time scales about linearly in N") {
    Rng rng(12);
    const BasisConfig cfg = BasisConfig::uniform(3, 5, 1.0);
    const HyperParams hp{1.0, 0.4, 0.1};
    const LambdaFactors lf = lambda_factors(cfg, hp);
    const TensorTrain tt =
        TensorTrain::random(cfg.m_per_dim, uniform_ranks(cfg.m_per_dim, 3), 1)
            .orthogonalized(1);
    const Eigen::MatrixXd small = oracle::random_inputs(2000, cfg, rng);
    const Eigen::MatrixXd large = oracle::random_inputs(4000, cfg, rng);
    const FeatureSet fs_small = FeatureSet::build(small, cfg);
    const FeatureSet fs_large = FeatureSet::build(large, cfg);

    auto best_of = [&](const FeatureSet& fs) {
        double best = 1e300;
        for (int rep = 0; rep < 5; ++rep) {
            Stopwatch watch;
            const Eigen::MatrixXd a = project_features(fs, lf, tt, 1);
            best = std::min(best, watch.seconds());
            CHECK(a.rows() == fs.n());
        }
        return best;
    };
    best_of(fs_small);  // warm-up
    const double t_small = best_of(fs_small);
    const double t_large = best_of(fs_large);
    CHECK(t_large <= 2.5 * std::max(t_small, 1e-6));
}
