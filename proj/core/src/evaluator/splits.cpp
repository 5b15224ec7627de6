#include "lmvs/evaluator/splits.hpp"

#include <cmath>
#include <numeric>
#include <set>

#include "lmvs/error.hpp"
#include "lmvs/rng.hpp"

namespace lmvs::evaluator {

SplitPlan make_splits(std::span<const std::string> video_ids, int n, double test_fraction, std::uint64_t seed) {
    if (n < 1) throw ConfigError("number of splits must be >= 1");
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw ConfigError("test fraction must lie in (0, 1)");
    if (std::set<std::string>(video_ids.begin(), video_ids.end()).size() != video_ids.size()) {
        throw ConfigError("video ids must be unique");
    }
    const auto total = video_ids.size();
    const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(total)));
    if (n_test < 1 || n_test >= total) {
        throw ConfigError("dataset of " + std::to_string(total) + " videos is too small for a " +
                          std::to_string(test_fraction) + " test fraction");
    }

    SplitPlan plan;
    plan.n_splits = n;
    plan.seed = seed;
    plan.test_fraction = test_fraction;
    for (int s = 0; s < n; ++s) {
        Split split;
        split.seed = mix_seed(seed, static_cast<std::uint64_t>(s));
        std::vector<std::size_t> order(total);
        std::iota(order.begin(), order.end(), std::size_t{0});
        Rng rng(split.seed);
        rng.shuffle(order);
        std::vector<bool> is_test(total, false);
        for (std::size_t i = 0; i < n_test; ++i) is_test[order[i]] = true;
        for (std::size_t i = 0; i < total; ++i) {
            (is_test[i] ? split.test_ids : split.train_ids).push_back(video_ids[i]);
        }
        plan.splits.push_back(std::move(split));
    }
    return plan;
}

}  // namespace lmvs::evaluator
