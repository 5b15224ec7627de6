#include "lmvs/evaluator/splits.hpp"

#include <gtest/gtest.h>

#include <set>

#include "lmvs/error.hpp"

namespace {

using lmvs::evaluator::make_splits;

std::vector<std::string> ids(int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back("v" + std::to_string(i));
    return out;
}

TEST(Splits, PartitionWithRoundedTestSize) {
    const auto plan = make_splits(ids(25), 5, 0.2, 3);
    ASSERT_EQ(plan.splits.size(), 5U);
    for (const auto& s : plan.splits) {
        EXPECT_EQ(s.test_ids.size(), 5U);
        EXPECT_EQ(s.train_ids.size(), 20U);
        std::set<std::string> all(s.test_ids.begin(), s.test_ids.end());
        all.insert(s.train_ids.begin(), s.train_ids.end());
        EXPECT_EQ(all.size(), 25U);
    }
    EXPECT_EQ(make_splits(ids(8), 1, 0.2, 0).splits[0].test_ids.size(), 2U);
}

TEST(Splits, DeterministicAndVaried) {
    const auto a = make_splits(ids(20), 5, 0.2, 7);
    const auto b = make_splits(ids(20), 5, 0.2, 7);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(a.splits[i].test_ids, b.splits[i].test_ids);
    EXPECT_NE(a.splits[0].test_ids, a.splits[1].test_ids);
    EXPECT_NE(a.splits[0].test_ids, make_splits(ids(20), 5, 0.2, 8).splits[0].test_ids);
}

TEST(Splits, RejectsDegenerateInputs) {
    EXPECT_THROW(make_splits(ids(2), 5, 0.2, 0), lmvs::ConfigError);
    EXPECT_THROW(make_splits(ids(10), 0, 0.2, 0), lmvs::ConfigError);
    EXPECT_THROW(make_splits(ids(10), 5, 1.0, 0), lmvs::ConfigError);
    EXPECT_THROW(make_splits(std::vector<std::string>{"a", "a", "b"}, 1, 0.4, 0), lmvs::ConfigError);
}

}  // namespace
