#include <doctest.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "oracles.hpp"
#include "tngp/tensor_train.hpp"

using namespace tngp;

namespace {

TensorTrain random_tt(const std::vector<Index>& modes, Index rank,
                      std::uint64_t seed) {
    return TensorTrain::random(modes, uniform_ranks(modes, rank), seed);
}

}  // namespace

TEST_CASE("random train is deterministic per seed") {
    const std::vector<Index> modes{3, 4, 2};
    const TensorTrain a = random_tt(modes, 2, 42);
    const TensorTrain b = random_tt(modes, 2, 42);
    const TensorTrain c = random_tt(modes, 2, 43);
    for (Index d = 0; d < 3; ++d) {
        CHECK(a.core(d).vec() == b.core(d).vec());
    }
    CHECK(a.core(0).vec() != c.core(0).vec());
}

TEST_CASE("random train shapes follow the chain") {
    const TensorTrain ones_rank = random_tt({4, 4}, 1, 0);
    CHECK(ones_rank.core(0).left() == 1);
    CHECK(ones_rank.core(0).right() == 1);
    CHECK(ones_rank.core(0).size() == 4);

    const TensorTrain tt = TensorTrain::random({4, 4, 4}, {1, 2, 2, 1}, 0);
    CHECK(tt.core(0).left() == 1);
    CHECK(tt.core(0).mode() == 4);
    CHECK(tt.core(0).right() == 2);
    CHECK(tt.core(1).left() == 2);
    CHECK(tt.core(1).right() == 2);
    CHECK(tt.core(2).left() == 2);
    CHECK(tt.core(2).right() == 1);

    CHECK_THROWS_AS(TensorTrain::random({4, 4}, {1, 2}, 0), Error);
    CHECK_THROWS_AS(TensorTrain::random({4, 4}, {2, 2, 1}, 0), Error);
    CHECK_THROWS_AS(TensorTrain::random({4, 4}, {1, 0, 1}, 0), Error);
}

TEST_CASE("contract_full trivial cases") {
    const TensorTrain single = random_tt({5}, 1, 7);
    CHECK(single.contract_full() == single.core(0).vec());

    // rank-1 all-ones cores multiply to all ones
    std::vector<Core3> cores;
    for (Index d = 0; d < 3; ++d) {
        cores.push_back(Core3::from_vec(Eigen::VectorXd::Ones(2), 1, 2, 1));
    }
    const TensorTrain ones(std::move(cores));
    CHECK(ones.contract_full().isApprox(Eigen::VectorXd::Ones(8)));
}

TEST_CASE("contract_full equals the brute-force rank sum") {
    const TensorTrain tt = random_tt({2, 2, 2}, 2, 5);
    const Eigen::VectorXd got = tt.contract_full();
    const Eigen::VectorXd want = oracle::naive_tt_contract(tt);
    REQUIRE(got.size() == 8);
    CHECK((got - want).norm() < 1e-12 * want.norm());
}

TEST_CASE("contract_full honors the cap") {
    const TensorTrain tt = random_tt({10, 10, 10}, 2, 1);
    CHECK_THROWS_AS(tt.contract_full(999), Error);
}

TEST_CASE("orthogonalized leaves a single-core train unchanged") {
    const TensorTrain tt = random_tt({6}, 1, 9);
    const TensorTrain ortho = tt.orthogonalized(0);
    CHECK(ortho.core(0).vec().isApprox(tt.core(0).vec(), 1e-15));
    const Eigen::MatrixXd w = ortho.materialize_projection(0);
    CHECK(w.isApprox(Eigen::MatrixXd::Identity(6, 6), 1e-14));
}

TEST_CASE("orthogonalized projection has orthonormal columns") {
    const TensorTrain tt = random_tt({3, 3, 3}, 2, 21);
    const TensorTrain ortho = tt.orthogonalized(1);
    REQUIRE(ortho.canonical_site() == 1);
    const Eigen::MatrixXd w = ortho.materialize_projection(1);
    const Eigen::MatrixXd gram = w.transpose() * w;
    CHECK((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols()))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
}

TEST_CASE("orthogonalized preserves the represented vector") {
    for (Index site = 0; site < 3; ++site) {
        const TensorTrain tt = random_tt({3, 4, 2}, 3, 100 + site);
        const Eigen::VectorXd before = tt.contract_full();
        const TensorTrain ortho = tt.orthogonalized(site);
        const Eigen::VectorXd after = ortho.contract_full();
        CHECK((before - after).norm() < 1e-12 * before.norm());
    }
}

TEST_CASE("orthogonalized is idempotent at a fixed site") {
    const TensorTrain tt = random_tt({3, 3, 3}, 2, 77);
    const TensorTrain once = tt.orthogonalized(1);
    const TensorTrain twice = once.orthogonalized(1);
    for (Index d = 0; d < 3; ++d) {
        CHECK((once.core(d).vec() - twice.core(d).vec()).norm() < 1e-12);
    }
}

TEST_CASE("orthogonalized shrinks infeasible ranks and keeps the value") {
    // requested rank far above what the modes support
    const TensorTrain tt = TensorTrain::random({2, 3, 2}, {1, 9, 9, 1}, 3);
    const Eigen::VectorXd before = tt.contract_full();
    const TensorTrain ortho = tt.orthogonalized(1);
    CHECK(ortho.ranks()[1] == 2);   // clipped to M_1
    CHECK(ortho.ranks()[2] == 2);   // clipped to M_3
    CHECK((ortho.contract_full() - before).norm() < 1e-12 * before.norm());
    const Eigen::MatrixXd w = ortho.materialize_projection(1);
    CHECK((w.transpose() * w -
           Eigen::MatrixXd::Identity(w.cols(), w.cols()))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
}

TEST_CASE("projection matrix for a single core is the identity") {
    const TensorTrain tt = random_tt({5}, 1, 2);
    CHECK(tt.materialize_projection(0).isApprox(
        Eigen::MatrixXd::Identity(5, 5), 1e-14));
}

TEST_CASE("projection matrix matches the Kronecker layout in 2D") {
    // site 2 of a rank-1 2D train: W = w1 (x) I_{M_2}
    const TensorTrain tt = random_tt({3, 4}, 1, 13);
    const Eigen::MatrixXd w = tt.materialize_projection(1);
    const Eigen::MatrixXd w1 = tt.core(0).left_unfolding();  // 3 x 1
    const Eigen::MatrixXd expected =
        Eigen::kroneckerProduct(w1, Eigen::MatrixXd::Identity(4, 4));
    CHECK(oracle::rel_frobenius(w, expected) < 1e-14);
}

TEST_CASE("projection matrix reproduces the contraction") {
    const TensorTrain tt = random_tt({3, 2, 3}, 2, 31);
    for (Index site = 0; site < 3; ++site) {
        const Eigen::MatrixXd w = tt.materialize_projection(site);
        CHECK(w.cols() == tt.subspace_size(site));
        const Eigen::VectorXd via_projection = w * tt.core(site).vec();
        const Eigen::VectorXd direct = tt.contract_full();
        CHECK((via_projection - direct).norm() < 1e-12 * direct.norm());
    }
}

TEST_CASE("projection identity holds on random instances") {
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const Index dims = 2 + static_cast<Index>(rng.next_u64() % 3);
        std::vector<Index> modes;
        for (Index d = 0; d < dims; ++d) {
            modes.push_back(2 + static_cast<Index>(rng.next_u64() % 4));
        }
        const Index rank = 1 + static_cast<Index>(rng.next_u64() % 3);
        const Index site = static_cast<Index>(rng.next_u64() % dims);
        const TensorTrain tt =
            random_tt(modes, rank, rng.next_u64()).orthogonalized(site);

        const Eigen::MatrixXd w = tt.materialize_projection(site);
        const Eigen::VectorXd direct = tt.contract_full();
        CHECK((w * tt.core(site).vec() - direct).norm() <=
              1e-12 * std::max(direct.norm(), 1e-12));
        // independent column-by-column construction
        const Eigen::MatrixXd naive = oracle::naive_projection(tt, site);
        CHECK(oracle::rel_frobenius(w, naive) < 1e-12);
    }
}

TEST_CASE("with_core keeps shape discipline and the canonical tag") {
    const TensorTrain tt = random_tt({3, 3}, 2, 8).orthogonalized(1);
    const Core3& center = tt.core(1);
    const TensorTrain swapped = tt.with_core(
        1, Core3::from_vec(Eigen::VectorXd::Ones(center.size()), center.left(),
                           center.mode(), center.right()));
    CHECK(swapped.canonical_site() == 1);
    const TensorTrain other = tt.with_core(
        0, Core3::from_vec(Eigen::VectorXd::Ones(tt.core(0).size()), 1, 3, 2));
    CHECK_FALSE(other.canonical_site().has_value());
    CHECK_THROWS_AS(tt.with_core(1, Core3(1, 1, 1)), Error);
}

TEST_CASE("rank helpers clip to feasible chains") {
    CHECK(uniform_ranks({4, 4, 4}, 2) == std::vector<Index>{1, 2, 2, 1});
    CHECK(uniform_ranks({2, 3, 2}, 50) == std::vector<Index>{1, 2, 2, 1});
    CHECK(maximal_ranks({3, 3, 3}) == std::vector<Index>{1, 3, 3, 1});
    CHECK(maximal_ranks({6, 6}) == std::vector<Index>{1, 6, 1});
}
