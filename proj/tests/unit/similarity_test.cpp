#include "lmvs/condenser/similarity.hpp"

#include <gtest/gtest.h>

#include <numeric>

#include "fixtures.hpp"
#include "lmvs/error.hpp"
#include "oracles.hpp"

namespace {

using namespace lmvs::condenser;
using lmvs::testing::Rows;

Rows random_rows(lmvs::Rng& rng, int n, int dim) {
    Rows rows;
    for (int i = 0; i < n; ++i) rows.push_back(lmvs::testing::random_vector(rng, dim));
    return rows;
}

TEST(Cosine, MatchesScalarLoopOracle) {
    lmvs::Rng rng(1);
    for (int trial = 0; trial < 100; ++trial) {
        const auto rows = random_rows(rng, 2 + static_cast<int>(rng.below(20)), 1 + static_cast<int>(rng.below(32)));
        const auto sim = cosine_similarity_matrix(make_window(rows)).values;
        const auto ref = lmvs::testing::cosine_oracle(rows);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (std::size_t j = 0; j < rows.size(); ++j) {
                ASSERT_NEAR(sim(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), ref[i][j], 1e-12);
            }
        }
    }
}

TEST(Cosine, SymmetricUnitDiagonalBounded) {
    lmvs::Rng rng(2);
    const auto sim = cosine_similarity_matrix(make_window(random_rows(rng, 18, 16))).values;
    EXPECT_TRUE(sim.isApprox(sim.transpose(), 0.0));
    for (Eigen::Index i = 0; i < sim.rows(); ++i) EXPECT_EQ(sim(i, i), 1.0);
    EXPECT_LE(sim.maxCoeff(), 1.0);
    EXPECT_GE(sim.minCoeff(), -1.0);
}

TEST(Cosine, InvariantToPositiveRowScaling) {
    lmvs::Rng rng(3);
    auto rows = random_rows(rng, 10, 6);
    const auto before = cosine_similarity_matrix(make_window(rows)).values;
    for (auto& r : rows) {
        const double s = 0.01 + 100.0 * rng.uniform();
        for (auto& x : r) x *= s;
    }
    const auto after = cosine_similarity_matrix(make_window(rows)).values;
    EXPECT_TRUE(after.isApprox(before, 1e-12));
}

TEST(Cosine, ZeroRowIsNumericError) {
    Rows rows = {{1.0, 0.0}, {0.0, 0.0}};
    EXPECT_THROW(cosine_similarity_matrix(make_window(rows)), lmvs::NumericError);
}

TEST(Window, RejectsEmptyRaggedAndNonFinite) {
    EXPECT_THROW(make_window(Rows{}), lmvs::ValidationError);
    EXPECT_THROW(make_window(Rows{{1.0, 2.0}, {1.0}}), lmvs::ValidationError);
    EXPECT_THROW(make_window(Rows{{1.0, std::nan("")}}), lmvs::ValidationError);
}

TEST(SelectBySimilarity, MatchesBruteForce) {
    lmvs::Rng rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        const auto rows = random_rows(rng, 18, 16);
        const auto got = select_by_similarity(cosine_similarity_matrix(make_window(rows)));
        ASSERT_EQ(static_cast<std::size_t>(got), lmvs::testing::similarity_select_oracle(rows));
    }
}

TEST(SelectBySimilarity, TieGoesToLowestIndex) {
    Rows rows(5, std::vector<double>{1.0, 2.0, 3.0});
    EXPECT_EQ(select_by_similarity(cosine_similarity_matrix(make_window(rows))), 0);
}

TEST(SelectBySimilarity, PicksTheConsensusOverAnOutlier) {
    Rows rows = {{0.0, 0.0, 1.0}, {1.0, 0.1, 0.0}, {1.0, -0.1, 0.0}, {1.0, 0.0, 0.0}};
    EXPECT_EQ(select_by_similarity(cosine_similarity_matrix(make_window(rows))), 3);
}

TEST(SelectBySimilarity, SelectedRowMovesWithPermutation) {
    lmvs::Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto rows = random_rows(rng, 12, 8);
        const auto base = select_by_similarity(cosine_similarity_matrix(make_window(rows)));
        std::vector<std::size_t> perm(rows.size());
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        rng.shuffle(perm);
        Rows permuted;
        for (auto p : perm) permuted.push_back(rows[p]);
        const auto got = select_by_similarity(cosine_similarity_matrix(make_window(permuted)));
        EXPECT_EQ(perm[static_cast<std::size_t>(got)], static_cast<std::size_t>(base));
    }
}

}  // namespace
