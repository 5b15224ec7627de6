#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lmvs/condenser/condensed_sequence.hpp"
#include "lmvs/datamodel/video.hpp"
#include "lmvs/scorer/model.hpp"

namespace lmvs::scorer {

struct ScorePrediction {
    /// One score per condensed entry.
    std::vector<double> per_second;
    /// One score per native frame.
    std::vector<double> per_frame;
};

/// Condensed embeddings as a sequence matrix, one row per entry.
Matrix sequence_matrix(const condenser::CondensedSequence& condensed);

/// Per-second regression targets: annotator-mean normalized frame scores
/// averaged over the native frames of each second.
std::vector<double> per_second_targets(const datamodel::CaptionedVideo& video);

/// Training example for one video; every entry gets its second's target.
Example make_example(const datamodel::CaptionedVideo& video, const condenser::CondensedSequence& condensed);

/// Copy with every embedding replaced by the all-ones vector.
condenser::CondensedSequence make_no_input_baseline(const condenser::CondensedSequence& condensed);
std::vector<Example> make_no_input_baseline(std::span<const Example> dataset);

/// Constant extension of entry scores onto native frames: frame k takes entry
/// floor(k * entries_per_second / native_fps), clamped to the last entry.
std::vector<double> broadcast_to_frames(std::span<const double> per_entry, int entries_per_second,
                                        std::int64_t native_frames, double native_fps);

/// Throws ValidationError when `condensed` does not match `video`.
ScorePrediction predict(const ScoringModel& model, const condenser::CondensedSequence& condensed,
                        const datamodel::CaptionedVideo& video);

/// Checks entry count and ordering of a condensed sequence against a video.
void check_condensed_matches(const condenser::CondensedSequence& condensed, const datamodel::CaptionedVideo& video);

}  // namespace lmvs::scorer
