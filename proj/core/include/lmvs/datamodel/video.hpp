#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lmvs/condenser/condensed_sequence.hpp"

namespace lmvs::datamodel {

using Embedding = std::vector<float>;

struct Caption {
    std::string text;
    Embedding embedding;

    bool operator==(const Caption&) const = default;
};

/// Captions generated for one sampled frame. `frame_index` is the ordinal of
/// the frame among the sampled frames (0, 1, 2, ...).
struct FrameCaptions {
    int frame_index = 0;
    std::vector<Caption> captions;

    bool operator==(const FrameCaptions&) const = default;
};

/// One annotator's per-native-frame importance scores. `normalized_scores` is
/// derived from `raw_scores` by min-max normalization and is never stored.
struct UserAnnotation {
    std::string user_id;
    std::vector<double> raw_scores;
    std::vector<double> normalized_scores;

    bool operator==(const UserAnnotation&) const = default;
};

/// Half-open range of sampled frames.
struct FrameRange {
    int begin = 0;
    int end = 0;

    int size() const { return end - begin; }
};

struct CaptionedVideo {
    std::string video_id;
    int fps_sampled = 6;
    int captions_per_frame = 3;
    int duration_seconds = 0;
    double native_fps = 30.0;
    int embedding_dim = 0;
    std::optional<std::string> category;
    std::vector<FrameCaptions> frames;
    std::vector<UserAnnotation> ground_truth;
    /// Native-frame indices; first is 0, last is the native frame count.
    std::vector<std::int64_t> shot_boundaries;
    /// Condensed sections keyed by method name.
    std::map<std::string, condenser::CondensedSequence> condensed;

    std::int64_t native_frame_count() const {
        return shot_boundaries.empty() ? 0 : shot_boundaries.back();
    }

    /// True when the final second holds fewer than `fps_sampled` frames.
    bool has_partial_second() const {
        return static_cast<std::int64_t>(frames.size()) <
               static_cast<std::int64_t>(fps_sampled) * duration_seconds;
    }

    /// Sampled frames covering second `second`.
    FrameRange second_window(int second) const;

    /// Second that native frame `frame` falls into, clamped to the last second.
    int second_of_native_frame(std::int64_t frame) const;

    /// Mean over annotators of the normalized scores, per native frame.
    std::vector<double> mean_normalized_scores() const;

    bool operator==(const CaptionedVideo&) const = default;
};

struct ValidationIssue {
    std::string field_path;
    std::string message;
};

/// Every violated invariant, in field order. Empty when the video is valid.
std::vector<ValidationIssue> collect_violations(const CaptionedVideo& video);

/// Throws ValidationError for the first violated invariant.
void validate(const CaptionedVideo& video);

/// Recomputes every annotation's `normalized_scores` from its raw scores.
void normalize_ground_truth(CaptionedVideo& video);

/// Serialized size of all caption embeddings (float32 payload), in bytes.
std::uint64_t embedding_payload_bytes(const CaptionedVideo& video);

}  // namespace lmvs::datamodel
