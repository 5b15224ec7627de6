#include "lmvs/evaluator/protocol.hpp"

#include <unordered_map>

#include "json.hpp"

#include "lmvs/condenser/condense.hpp"
#include "lmvs/datamodel/interchange.hpp"
#include "lmvs/error.hpp"
#include "lmvs/rng.hpp"
#include "lmvs/scorer/checkpoint.hpp"
#include "lmvs/scorer/predict.hpp"
#include "lmvs/summarizer/keyshot.hpp"
#include "lmvs/util/parallel.hpp"

namespace lmvs::evaluator {
namespace {

// Stream ids for seeds derived from a split seed.
constexpr std::uint64_t kModelStream = 1;
constexpr std::uint64_t kTrainStream = 2;
constexpr std::uint64_t kRandomStream = 3;

// Random-score summaries averaged per video, so the baseline is an expectation
// rather than a single noisy draw.
constexpr int kRandomDraws = 20;

condenser::CondenseMethod condense_method(PipelineMethod method) {
    switch (method) {
        case PipelineMethod::kmeans: return condenser::CondenseMethod::kmeans;
        case PipelineMethod::unfiltered: return condenser::CondenseMethod::unfiltered;
        case PipelineMethod::cosine:
        case PipelineMethod::no_input: return condenser::CondenseMethod::cosine;
    }
    return condenser::CondenseMethod::cosine;
}

struct CategoryMean {
    double sum = 0.0;
    int count = 0;
};

std::map<std::string, double> finish(const std::map<std::string, CategoryMean>& acc) {
    std::map<std::string, double> out;
    for (const auto& [k, v] : acc) out[k] = v.sum / v.count;
    return out;
}

nlohmann::ordered_json result_json(const EvalResult& r) {
    return {{"precision", r.precision}, {"recall", r.recall}, {"f_score", r.f_score}};
}

}  // namespace

std::string_view to_string(PipelineMethod method) {
    switch (method) {
        case PipelineMethod::cosine: return "cosine";
        case PipelineMethod::kmeans: return "kmeans";
        case PipelineMethod::unfiltered: return "unfiltered";
        case PipelineMethod::no_input: return "no-input";
    }
    return "unknown";
}

std::optional<PipelineMethod> parse_pipeline_method(std::string_view name) {
    if (name == "cosine") return PipelineMethod::cosine;
    if (name == "kmeans") return PipelineMethod::kmeans;
    if (name == "unfiltered") return PipelineMethod::unfiltered;
    if (name == "no-input") return PipelineMethod::no_input;
    return std::nullopt;
}

std::vector<condenser::CondensedSequence> prepare_inputs(std::span<const datamodel::CaptionedVideo> videos,
                                                         PipelineMethod method, std::uint64_t seed, int jobs) {
    const auto cm = condense_method(method);
    std::vector<condenser::CondensedSequence> out(videos.size());
    util::parallel_for(videos.size(), jobs, [&](std::size_t i) {
        out[i] = condenser::condense_video(videos[i], cm, mix_seed(seed, i));
        if (method == PipelineMethod::no_input) out[i] = scorer::make_no_input_baseline(out[i]);
    });
    return out;
}

ProtocolResult evaluate_protocol(std::span<const datamodel::CaptionedVideo> videos, const PipelineConfig& config,
                                 const SplitPlan& plan) {
    if (videos.empty()) throw ValidationError("dataset", "no videos to evaluate");
    config.train.validate();
    summarizer::budget_frames(config.budget_fraction, 1);
    scorer::ModelConfig model_cfg = config.model;
    model_cfg.d_model = videos.front().embedding_dim;
    model_cfg.validate();

    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < videos.size(); ++i) {
        if (videos[i].embedding_dim != model_cfg.d_model) {
            throw ValidationError(videos[i].video_id, "embedding_dim differs from the rest of the dataset");
        }
        if (!index.emplace(videos[i].video_id, i).second) {
            throw ValidationError(videos[i].video_id, "duplicate video id");
        }
    }
    auto lookup = [&](const std::string& id) {
        const auto it = index.find(id);
        if (it == index.end()) throw ValidationError("splits", "unknown video id '" + id + "'");
        return it->second;
    };

    const auto inputs = prepare_inputs(videos, config.method, config.seed, config.jobs);
    std::vector<scorer::Example> examples(videos.size());
    std::vector<std::vector<std::vector<std::uint8_t>>> gt_masks(videos.size());
    util::parallel_for(videos.size(), config.jobs, [&](std::size_t i) {
        examples[i] = scorer::make_example(videos[i], inputs[i]);
        gt_masks[i] = ground_truth_masks(videos[i], config.budget_fraction);
    });

    ProtocolResult result;
    result.splits.resize(plan.splits.size());
    util::parallel_for(plan.splits.size(), config.jobs, [&](std::size_t s) {
        const auto& split = plan.splits[s];
        auto& out = result.splits[s];
        out.split_id = static_cast<int>(s);
        out.seed = split.seed;
        out.model_seed = mix_seed(split.seed, kModelStream);
        out.train_seed = mix_seed(split.seed, kTrainStream);

        std::vector<scorer::Example> train_set;
        for (const auto& id : split.train_ids) train_set.push_back(examples[lookup(id)]);
        auto cfg = model_cfg;
        cfg.seed = out.model_seed;
        auto tcfg = config.train;
        tcfg.seed = out.train_seed;
        const auto trained = scorer::train(scorer::init_model(cfg), train_set, tcfg);
        out.final_train_loss = trained.history.back().train_loss;

        Rng random_scores(mix_seed(split.seed, kRandomStream));
        std::map<std::string, CategoryMean> categories;
        for (const auto& id : split.test_ids) {
            const auto i = lookup(id);
            const auto& video = videos[i];
            const auto pred = scorer::predict(trained.model, inputs[i], video);
            const auto summary = summarizer::build_summary(video, inputs[i], pred, config.budget_fraction);

            VideoEval ve;
            ve.video_id = id;
            ve.category = video.category;
            ve.result = fscore_multi_user(summary.frame_mask, gt_masks[i], config.aggregation);

            std::vector<double> noise(static_cast<std::size_t>(video.native_frame_count()));
            for (int draw = 0; draw < kRandomDraws; ++draw) {
                for (auto& x : noise) x = random_scores.uniform();
                const auto mask = summarizer::keyshot_mask(noise, video.shot_boundaries, config.budget_fraction);
                ve.random_f += fscore_multi_user(mask, gt_masks[i], config.aggregation).f_score;
            }
            ve.random_f /= kRandomDraws;

            out.mean.precision += ve.result.precision;
            out.mean.recall += ve.result.recall;
            out.mean.f_score += ve.result.f_score;
            out.random_f += ve.random_f;
            if (ve.category) {
                auto& c = categories[*ve.category];
                c.sum += ve.result.f_score;
                ++c.count;
            }
            out.videos.push_back(std::move(ve));
        }
        const auto n = static_cast<double>(out.videos.size());
        out.mean = {out.mean.precision / n, out.mean.recall / n, out.mean.f_score / n};
        out.random_f /= n;
        out.category_f = finish(categories);
    });

    std::map<std::string, CategoryMean> categories;
    for (const auto& split : result.splits) {
        result.mean.precision += split.mean.precision;
        result.mean.recall += split.mean.recall;
        result.mean.f_score += split.mean.f_score;
        result.random_f += split.random_f;
        for (const auto& v : split.videos) {
            if (!v.category) continue;
            auto& c = categories[*v.category];
            c.sum += v.result.f_score;
            ++c.count;
        }
    }
    const auto n = static_cast<double>(result.splits.size());
    result.mean = {result.mean.precision / n, result.mean.recall / n, result.mean.f_score / n};
    result.random_f /= n;
    result.category_f = finish(categories);
    return result;
}

std::string format_eval_report(const ProtocolResult& result, const PipelineConfig& config, const SplitPlan& plan,
                               const std::map<std::string, std::string>& metadata) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["format"] = "lmvs-eval-report";
    doc["format_version"] = 1;

    ordered_json meta = ordered_json::object();
    meta["interchange_format_version"] = datamodel::kInterchangeVersion;
    meta["checkpoint_version"] = scorer::kCheckpointVersion;
    for (const auto& [k, v] : metadata) meta[k] = v;
    doc["metadata"] = std::move(meta);

    const auto& m = config.model;
    const auto& t = config.train;
    doc["config"] = {
        {"method", to_string(config.method)},
        {"seed", config.seed},
        {"budget_fraction", config.budget_fraction},
        {"aggregation", to_string(config.aggregation)},
        {"model",
         {{"n_layers", m.n_layers},
          {"n_heads", m.n_heads},
          {"d_ff", m.d_ff},
          {"max_seq_len", m.max_seq_len},
          {"dropout", m.dropout},
          {"positional_encoding", scorer::to_string(m.positional_encoding)}}},
        {"train",
         {{"optimizer", scorer::to_string(t.optimizer)},
          {"learning_rate", t.learning_rate},
          {"epochs", t.epochs},
          {"batch_size", t.batch_size},
          {"grad_clip", t.grad_clip ? ordered_json(*t.grad_clip) : ordered_json(nullptr)}}},
        {"ground_truth_masks", "binary annotations as-is; graded annotations via keyshot knapsack at the budget"}};
    doc["split_plan"] = {{"n_splits", plan.n_splits}, {"seed", plan.seed}, {"test_fraction", plan.test_fraction}};

    ordered_json splits = ordered_json::array();
    for (const auto& s : result.splits) {
        ordered_json row = {{"split", s.split_id}, {"seed", s.seed}, {"model_seed", s.model_seed},
                            {"train_seed", s.train_seed}};
        row.update(result_json(s.mean));
        row["random_f"] = s.random_f;
        row["final_train_loss"] = s.final_train_loss;
        ordered_json vids = ordered_json::array();
        for (const auto& v : s.videos) {
            ordered_json vr = {{"video_id", v.video_id},
                               {"category", v.category ? ordered_json(*v.category) : ordered_json(nullptr)}};
            vr.update(result_json(v.result));
            vr["random_f"] = v.random_f;
            vids.push_back(std::move(vr));
        }
        row["videos"] = std::move(vids);
        row["category_f"] = s.category_f;
        splits.push_back(std::move(row));
    }
    doc["splits"] = std::move(splits);

    ordered_json aggregate = result_json(result.mean);
    aggregate["random_f"] = result.random_f;
    aggregate["category_f"] = result.category_f;
    doc["aggregate"] = std::move(aggregate);
    return doc.dump(2) + "\n";
}

}  // namespace lmvs::evaluator
