#include "lmvs/evaluator/metrics.hpp"

#include <algorithm>

#include "lmvs/error.hpp"
#include "lmvs/summarizer/keyshot.hpp"

namespace lmvs::evaluator {

EvalResult fscore(std::span<const std::uint8_t> pred_mask, std::span<const std::uint8_t> gt_mask) {
    if (pred_mask.size() != gt_mask.size()) {
        throw ValidationError("mask", "prediction has " + std::to_string(pred_mask.size()) +
                                          " frames, ground truth has " + std::to_string(gt_mask.size()));
    }
    std::int64_t pred = 0;
    std::int64_t gt = 0;
    std::int64_t overlap = 0;
    for (std::size_t k = 0; k < pred_mask.size(); ++k) {
        const bool p = pred_mask[k] != 0;
        const bool g = gt_mask[k] != 0;
        pred += p;
        gt += g;
        overlap += p && g;
    }
    EvalResult r;
    if (pred > 0) r.precision = 100.0 * static_cast<double>(overlap) / static_cast<double>(pred);
    if (gt > 0) r.recall = 100.0 * static_cast<double>(overlap) / static_cast<double>(gt);
    // 2PR / (P + R) reduces to 2|pred & gt| / (|pred| + |gt|) when both are nonzero.
    if (overlap > 0) r.f_score = 100.0 * 2.0 * static_cast<double>(overlap) / static_cast<double>(pred + gt);
    return r;
}

std::string_view to_string(Aggregation aggregation) { return aggregation == Aggregation::max ? "max" : "mean"; }

std::optional<Aggregation> parse_aggregation(std::string_view name) {
    if (name == "max") return Aggregation::max;
    if (name == "mean") return Aggregation::mean;
    return std::nullopt;
}

EvalResult fscore_multi_user(std::span<const std::uint8_t> pred_mask,
                             std::span<const std::vector<std::uint8_t>> gt_masks, Aggregation aggregation) {
    if (gt_masks.empty()) throw ValidationError("ground_truth", "no annotator masks to score against");
    EvalResult best;
    EvalResult sum;
    bool first = true;
    for (const auto& gt : gt_masks) {
        const auto r = fscore(pred_mask, gt);
        if (first || r.f_score > best.f_score) best = r;
        first = false;
        sum.precision += r.precision;
        sum.recall += r.recall;
        sum.f_score += r.f_score;
    }
    if (aggregation == Aggregation::max) return best;
    const auto n = static_cast<double>(gt_masks.size());
    return {sum.precision / n, sum.recall / n, sum.f_score / n};
}

std::vector<std::uint8_t> annotation_mask(const datamodel::UserAnnotation& user,
                                          std::span<const std::int64_t> shot_boundaries, double budget_fraction) {
    const auto& scores = user.normalized_scores;
    const bool binary = std::all_of(scores.begin(), scores.end(), [](double x) { return x == 0.0 || x == 1.0; });
    if (binary) {
        std::vector<std::uint8_t> mask(scores.size());
        std::transform(scores.begin(), scores.end(), mask.begin(), [](double x) { return x == 1.0 ? 1 : 0; });
        return mask;
    }
    return summarizer::keyshot_mask(scores, shot_boundaries, budget_fraction);
}

std::vector<std::vector<std::uint8_t>> ground_truth_masks(const datamodel::CaptionedVideo& video,
                                                          double budget_fraction) {
    std::vector<std::vector<std::uint8_t>> masks;
    masks.reserve(video.ground_truth.size());
    for (const auto& user : video.ground_truth) {
        masks.push_back(annotation_mask(user, video.shot_boundaries, budget_fraction));
    }
    return masks;
}

}  // namespace lmvs::evaluator
