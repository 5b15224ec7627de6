#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lmvs::evaluator {

inline constexpr int kDefaultSplits = 5;
inline constexpr double kDefaultTestFraction = 0.2;

struct Split {
    std::uint64_t seed = 0;
    /// Both lists keep the input order of `video_ids`.
    std::vector<std::string> train_ids;
    std::vector<std::string> test_ids;
};

struct SplitPlan {
    int n_splits = kDefaultSplits;
    std::uint64_t seed = 0;
    double test_fraction = kDefaultTestFraction;
    std::vector<Split> splits;
};

/// `n` independent random train/test partitions with round(test_fraction * N)
/// test ids each. Throws ConfigError when the test or train side would be
/// empty, or when ids repeat.
SplitPlan make_splits(std::span<const std::string> video_ids, int n, double test_fraction, std::uint64_t seed);

}  // namespace lmvs::evaluator
