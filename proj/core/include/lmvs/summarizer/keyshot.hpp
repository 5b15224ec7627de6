#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lmvs/condenser/condensed_sequence.hpp"
#include "lmvs/datamodel/video.hpp"
#include "lmvs/scorer/predict.hpp"

namespace lmvs::summarizer {

inline constexpr double kDefaultBudgetFraction = 0.15;

/// Frames [start_frame, end_frame) of one shot and its mean frame score.
struct Shot {
    std::int64_t start_frame = 0;
    std::int64_t end_frame = 0;
    std::int64_t length_frames = 0;
    double value = 0.0;
};

struct ShotTable {
    std::vector<Shot> shots;
};

/// Throws ValidationError when the boundaries do not partition the scores.
ShotTable aggregate_shots(std::span<const double> frame_scores, std::span<const std::int64_t> boundaries);

/// Exact 0/1 knapsack maximizing sum(value * length) with total length at
/// most `budget_frames`. Among optimal selections, lower shot ids are
/// preferred. Returns ascending shot ids.
std::vector<int> knapsack_select(const ShotTable& table, std::int64_t budget_frames);

/// floor(fraction * native_frames); throws ConfigError unless fraction is in (0, 1].
std::int64_t budget_frames(double fraction, std::int64_t native_frames);

/// 0/1 mask over native frames, set on the frames of the selected shots.
std::vector<std::uint8_t> shots_to_mask(const ShotTable& table, std::span<const int> selected,
                                        std::int64_t native_frames);

/// aggregate_shots + knapsack_select + shots_to_mask in one call.
std::vector<std::uint8_t> keyshot_mask(std::span<const double> frame_scores,
                                       std::span<const std::int64_t> boundaries, double budget_fraction);

struct SummaryLine {
    int shot_id = 0;
    int second = 0;
    std::string caption;
};

struct SummaryResult {
    std::vector<int> selected_shot_ids;
    std::vector<std::uint8_t> frame_mask;
    std::int64_t budget_frames = 0;
    std::int64_t total_selected_frames = 0;
    /// One caption per selected shot, in temporal order.
    std::vector<SummaryLine> text_summary;
};

/// Keyshot summary under `budget_fraction` of the native duration. Each
/// selected shot contributes the condensed caption of its highest-scoring
/// second to the text summary.
SummaryResult build_summary(const datamodel::CaptionedVideo& video, const condenser::CondensedSequence& condensed,
                            const scorer::ScorePrediction& pred, double budget_fraction = kDefaultBudgetFraction);

}  // namespace lmvs::summarizer
