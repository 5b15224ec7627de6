#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lmvs/datamodel/video.hpp"

namespace lmvs::evaluator {

/// Precision, recall and F-score, all in percent.
struct EvalResult {
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
};

/// P = |pred & gt| / |pred|, R = |pred & gt| / |gt|, F = 2PR / (P + R).
/// An empty mask makes its ratio 0. Throws ValidationError on length mismatch.
EvalResult fscore(std::span<const std::uint8_t> pred_mask, std::span<const std::uint8_t> gt_mask);

enum class Aggregation { max, mean };

std::string_view to_string(Aggregation aggregation);
std::optional<Aggregation> parse_aggregation(std::string_view name);

/// Scores against every annotator. `max` keeps the best annotator's result;
/// `mean` averages P, R and F independently.
EvalResult fscore_multi_user(std::span<const std::uint8_t> pred_mask,
                             std::span<const std::vector<std::uint8_t>> gt_masks, Aggregation aggregation);

/// Binary mask of one annotation. Annotations whose normalized scores are
/// already 0/1 are used as-is; graded annotations become keyshot masks via the
/// same knapsack selection and budget as predictions.
std::vector<std::uint8_t> annotation_mask(const datamodel::UserAnnotation& user,
                                          std::span<const std::int64_t> shot_boundaries, double budget_fraction);

std::vector<std::vector<std::uint8_t>> ground_truth_masks(const datamodel::CaptionedVideo& video,
                                                          double budget_fraction);

}  // namespace lmvs::evaluator
