#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lmvs/datamodel/video.hpp"
#include "lmvs/evaluator/metrics.hpp"
#include "lmvs/evaluator/splits.hpp"
#include "lmvs/scorer/model.hpp"
#include "lmvs/scorer/train.hpp"

namespace lmvs::evaluator {

/// Scorer input variant. `no_input` condenses with the cosine selector and then
/// replaces every embedding with the all-ones vector.
enum class PipelineMethod { cosine, kmeans, unfiltered, no_input };

std::string_view to_string(PipelineMethod method);
std::optional<PipelineMethod> parse_pipeline_method(std::string_view name);

struct PipelineConfig {
    PipelineMethod method = PipelineMethod::cosine;
    /// `d_model` is taken from the data.
    scorer::ModelConfig model;
    scorer::TrainConfig train;
    double budget_fraction = 0.15;
    Aggregation aggregation = Aggregation::max;
    std::uint64_t seed = 0;
    int jobs = 1;
};

struct VideoEval {
    std::string video_id;
    std::optional<std::string> category;
    EvalResult result;
    /// Mean F-score of 20 summaries built from uniformly random frame scores.
    double random_f = 0.0;
};

struct SplitResult {
    int split_id = 0;
    std::uint64_t seed = 0;
    std::uint64_t model_seed = 0;
    std::uint64_t train_seed = 0;
    EvalResult mean;
    double random_f = 0.0;
    double final_train_loss = 0.0;
    std::vector<VideoEval> videos;
    std::map<std::string, double> category_f;
};

struct ProtocolResult {
    std::vector<SplitResult> splits;
    EvalResult mean;
    double random_f = 0.0;
    std::map<std::string, double> category_f;
};

/// Scorer input sequences for every video under `method`, condensed with
/// seeds derived from `seed`.
std::vector<condenser::CondensedSequence> prepare_inputs(std::span<const datamodel::CaptionedVideo> videos,
                                                         PipelineMethod method, std::uint64_t seed, int jobs = 1);

/// For every split: train a fresh scorer on the train videos, summarize the
/// test videos under the budget and score them against every annotator. Split
/// results are averaged with equal weight. Splits run on up to `config.jobs`
/// threads; results do not depend on the thread count.
ProtocolResult evaluate_protocol(std::span<const datamodel::CaptionedVideo> videos, const PipelineConfig& config,
                                 const SplitPlan& plan);

/// JSON evaluation report: run metadata, one row per split, aggregate row.
std::string format_eval_report(const ProtocolResult& result, const PipelineConfig& config, const SplitPlan& plan,
                               const std::map<std::string, std::string>& metadata = {});

}  // namespace lmvs::evaluator
