#include "lmvs/summarizer/keyshot.hpp"

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "lmvs/condenser/condense.hpp"
#include "lmvs/error.hpp"
#include "lmvs/scorer/predict.hpp"
#include "oracles.hpp"

namespace {

using namespace lmvs::summarizer;

struct Instance {
    std::vector<double> scores;
    std::vector<std::int64_t> bounds;
};

Instance random_instance(lmvs::Rng& rng, int max_shots) {
    Instance in;
    const int shots = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_shots)));
    in.bounds.push_back(0);
    for (int s = 0; s < shots; ++s) in.bounds.push_back(in.bounds.back() + 1 + static_cast<std::int64_t>(rng.below(60)));
    in.scores.resize(static_cast<std::size_t>(in.bounds.back()));
    for (auto& x : in.scores) x = rng.uniform();
    return in;
}

double objective(const ShotTable& t, const std::vector<int>& ids) {
    double v = 0.0;
    for (int id : ids) v += t.shots[static_cast<std::size_t>(id)].value * t.shots[static_cast<std::size_t>(id)].length_frames;
    return v;
}

TEST(AggregateShots, MatchesScalarOracle) {
    lmvs::Rng rng(1);
    for (int trial = 0; trial < 100; ++trial) {
        const auto in = random_instance(rng, 20);
        const auto table = aggregate_shots(in.scores, in.bounds);
        const auto ref = lmvs::testing::shots_oracle(in.scores, in.bounds);
        ASSERT_EQ(table.shots.size(), ref.size());
        for (std::size_t s = 0; s < ref.size(); ++s) {
            EXPECT_EQ(table.shots[s].length_frames, ref[s].length);
            EXPECT_NEAR(table.shots[s].value, ref[s].mean, 1e-12);
        }
    }
}

TEST(AggregateShots, RejectsBoundariesThatDoNotPartition) {
    const std::vector<double> scores(10, 0.5);
    EXPECT_THROW(aggregate_shots(scores, std::vector<std::int64_t>{0, 5, 9}), lmvs::ValidationError);
    EXPECT_THROW(aggregate_shots(scores, std::vector<std::int64_t>{1, 10}), lmvs::ValidationError);
    EXPECT_THROW(aggregate_shots(scores, std::vector<std::int64_t>{0, 5, 5, 10}), lmvs::ValidationError);
}

TEST(Knapsack, MatchesExhaustiveSearch) {
    lmvs::Rng rng(2);
    for (int trial = 0; trial < 300; ++trial) {
        const auto in = random_instance(rng, 12);
        const auto table = aggregate_shots(in.scores, in.bounds);
        const auto budget = budget_frames(0.05 + 0.5 * rng.uniform(), in.bounds.back());
        const auto ids = knapsack_select(table, budget);
        std::vector<std::int64_t> lengths;
        std::vector<double> values;
        for (const auto& s : table.shots) {
            lengths.push_back(s.length_frames);
            values.push_back(s.value);
        }
        ASSERT_NEAR(objective(table, ids), lmvs::testing::knapsack_brute_force(lengths, values, budget), 1e-9);
        std::int64_t used = 0;
        for (int id : ids) used += table.shots[static_cast<std::size_t>(id)].length_frames;
        ASSERT_LE(used, budget);
        ASSERT_TRUE(std::is_sorted(ids.begin(), ids.end()));
    }
}

TEST(Knapsack, HandCase) {
    ShotTable t;
    t.shots = {{0, 10, 10, 0.9}, {10, 30, 20, 0.5}, {30, 45, 15, 0.8}};
    EXPECT_EQ(knapsack_select(t, 25), (std::vector<int>{0, 2}));
    EXPECT_EQ(knapsack_select(t, 9), std::vector<int>{});
    EXPECT_EQ(knapsack_select(t, 45), (std::vector<int>{0, 1, 2}));
}

TEST(Knapsack, TiesPreferLowerIds) {
    ShotTable t;
    t.shots = {{0, 5, 5, 0.5}, {5, 10, 5, 0.5}, {10, 15, 5, 0.5}};
    EXPECT_EQ(knapsack_select(t, 10), (std::vector<int>{0, 1}));
}

TEST(Budget, FloorOfFraction) {
    EXPECT_EQ(budget_frames(0.15, 1000), 150);
    EXPECT_EQ(budget_frames(0.15, 999), 149);
    EXPECT_EQ(budget_frames(0.15, 6), 0);
    EXPECT_THROW(budget_frames(0.0, 10), lmvs::ConfigError);
    EXPECT_THROW(budget_frames(1.5, 10), lmvs::ConfigError);
}

TEST(KeyshotMask, NeverExceedsBudget) {
    lmvs::Rng rng(3);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto in = random_instance(rng, 30);
        const auto mask = keyshot_mask(in.scores, in.bounds, 0.15);
        std::int64_t on = 0;
        for (auto m : mask) on += m;
        ASSERT_LE(on, in.bounds.back() * 15 / 100);
    }
}

TEST(KeyshotMask, SelectsWholeShotsOnly) {
    lmvs::Rng rng(4);
    const auto in = random_instance(rng, 15);
    const auto mask = keyshot_mask(in.scores, in.bounds, 0.3);
    for (std::size_t s = 0; s + 1 < in.bounds.size(); ++s) {
        for (auto k = in.bounds[s] + 1; k < in.bounds[s + 1]; ++k) {
            EXPECT_EQ(mask[static_cast<std::size_t>(k)], mask[static_cast<std::size_t>(in.bounds[s])]);
        }
    }
}

TEST(BuildSummary, TextFollowsSelectedShots) {
    const auto v = lmvs::testing::small_video();
    const auto seq = lmvs::condenser::condense_video(v, lmvs::condenser::CondenseMethod::cosine, 0);
    lmvs::scorer::ScorePrediction pred;
    for (int s = 0; s < 10; ++s) pred.per_second.push_back(static_cast<double>(s) / 10.0);
    pred.per_frame = lmvs::scorer::broadcast_to_frames(pred.per_second, 1, v.native_frame_count(), v.native_fps);
    const auto summary = build_summary(v, seq, pred, 0.3);
    EXPECT_EQ(summary.budget_frames, 90);
    EXPECT_LE(summary.total_selected_frames, 90);
    EXPECT_EQ(summary.text_summary.size(), summary.selected_shot_ids.size());
    for (std::size_t i = 1; i < summary.text_summary.size(); ++i) {
        EXPECT_LT(summary.text_summary[i - 1].second, summary.text_summary[i].second);
    }
    for (const auto& line : summary.text_summary) {
        EXPECT_EQ(line.caption, seq.entries[static_cast<std::size_t>(line.second)].text);
    }
}

}  // namespace
