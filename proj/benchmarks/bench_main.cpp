#include <benchmark/benchmark.h>

#include "lmvs/condenser/kmeans.hpp"
#include "lmvs/condenser/similarity.hpp"
#include "lmvs/rng.hpp"
#include "lmvs/scorer/model.hpp"
#include "lmvs/summarizer/keyshot.hpp"

namespace {

using namespace lmvs;

condenser::EmbeddingMatrix random_window(std::uint64_t seed, int rows, int dim) {
    Rng rng(seed);
    std::vector<std::vector<double>> data(static_cast<std::size_t>(rows), std::vector<double>(static_cast<std::size_t>(dim)));
    for (auto& r : data) {
        for (auto& x : r) x = rng.normal();
    }
    return condenser::make_window(data);
}

void BM_SelectBySimilarity(benchmark::State& state) {
    const auto window = random_window(1, 18, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(condenser::select_by_similarity(condenser::cosine_similarity_matrix(window)));
    }
}
BENCHMARK(BM_SelectBySimilarity)->Arg(16)->Arg(384)->Arg(768);

void BM_SelectByCentroid(benchmark::State& state) {
    const auto window = random_window(2, 18, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(condenser::select_by_centroid(window, condenser::kmeans_partition(window)));
    }
}
BENCHMARK(BM_SelectByCentroid)->Arg(16)->Arg(384)->Arg(768);

// A 4-minute video at 30 fps split into ~3 s shots.
void BM_Knapsack(benchmark::State& state) {
    Rng rng(3);
    const std::int64_t frames = state.range(0);
    std::vector<double> scores(static_cast<std::size_t>(frames));
    for (auto& x : scores) x = rng.uniform();
    std::vector<std::int64_t> bounds = {0};
    while (bounds.back() < frames) bounds.push_back(std::min(frames, bounds.back() + 30 + static_cast<std::int64_t>(rng.below(150))));
    for (auto _ : state) benchmark::DoNotOptimize(summarizer::keyshot_mask(scores, bounds, 0.15));
}
BENCHMARK(BM_Knapsack)->Arg(1800)->Arg(7200)->Arg(21600);

scorer::Matrix random_sequence(int length, int dim) {
    Rng rng(4);
    scorer::Matrix x(length, dim);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
    return x;
}

void BM_Forward(benchmark::State& state) {
    scorer::ModelConfig cfg;
    const auto model = scorer::init_model(cfg);
    const auto x = random_sequence(static_cast<int>(state.range(0)), cfg.d_model);
    for (auto _ : state) benchmark::DoNotOptimize(scorer::forward(model, x));
}
BENCHMARK(BM_Forward)->Arg(60)->Arg(240);

void BM_Gradient(benchmark::State& state) {
    scorer::ModelConfig cfg;
    const auto model = scorer::init_model(cfg);
    std::vector<scorer::Example> batch(4);
    for (auto& ex : batch) {
        ex.inputs = random_sequence(static_cast<int>(state.range(0)), cfg.d_model);
        ex.targets = scorer::Vector::Constant(state.range(0), 0.5);
    }
    for (auto _ : state) benchmark::DoNotOptimize(scorer::gradient(model, batch).loss);
}
BENCHMARK(BM_Gradient)->Arg(60)->Arg(240);

}  // namespace

BENCHMARK_MAIN();
