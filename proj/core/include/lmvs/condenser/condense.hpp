#pragma once

#include <cstdint>

#include "lmvs/condenser/condensed_sequence.hpp"
#include "lmvs/condenser/similarity.hpp"
#include "lmvs/datamodel/video.hpp"

namespace lmvs::condenser {

/// Caption embeddings of all frames in `second`, in (frame, caption) order.
EmbeddingMatrix second_window_matrix(const datamodel::CaptionedVideo& video, int second);

/// Reduces the video's captions to one caption per second (`cosine`,
/// `kmeans`) or to the first caption of two evenly spaced frames per second
/// (`unfiltered`). Windows are processed on up to `jobs` threads; the result
/// does not depend on `jobs`.
CondensedSequence condense_video(const datamodel::CaptionedVideo& video, CondenseMethod method,
                                 std::uint64_t seed, int jobs = 1);

}  // namespace lmvs::condenser
