#include "lmvs/scorer/predict.hpp"

#include <algorithm>
#include <cmath>

#include "lmvs/error.hpp"

namespace lmvs::scorer {

Matrix sequence_matrix(const condenser::CondensedSequence& condensed) {
    if (condensed.entries.empty()) return Matrix(0, 0);
    const auto dim = static_cast<Eigen::Index>(condensed.entries.front().embedding.size());
    Matrix out(static_cast<Eigen::Index>(condensed.entries.size()), dim);
    for (std::size_t i = 0; i < condensed.entries.size(); ++i) {
        const auto& e = condensed.entries[i].embedding;
        if (static_cast<Eigen::Index>(e.size()) != dim) {
            throw ValidationError("condensed[" + std::to_string(i) + "]", "embedding-dimension mismatch");
        }
        for (Eigen::Index j = 0; j < dim; ++j) out(static_cast<Eigen::Index>(i), j) = e[static_cast<std::size_t>(j)];
    }
    return out;
}

std::vector<double> per_second_targets(const datamodel::CaptionedVideo& video) {
    const auto frame_scores = video.mean_normalized_scores();
    std::vector<double> sums(static_cast<std::size_t>(video.duration_seconds), 0.0);
    std::vector<std::int64_t> counts(sums.size(), 0);
    for (std::size_t k = 0; k < frame_scores.size(); ++k) {
        const auto s = static_cast<std::size_t>(video.second_of_native_frame(static_cast<std::int64_t>(k)));
        sums[s] += frame_scores[k];
        ++counts[s];
    }
    for (std::size_t s = 0; s < sums.size(); ++s) {
        if (counts[s] > 0) sums[s] /= static_cast<double>(counts[s]);
    }
    return sums;
}

void check_condensed_matches(const condenser::CondensedSequence& condensed, const datamodel::CaptionedVideo& video) {
    const auto expected = static_cast<std::size_t>(video.duration_seconds) * condensed.entries_per_second();
    if (condensed.entries.size() != expected) {
        throw ValidationError("condensed", "sequence has " + std::to_string(condensed.entries.size()) +
                                               " entries, video '" + video.video_id + "' needs " +
                                               std::to_string(expected));
    }
    for (std::size_t i = 0; i < condensed.entries.size(); ++i) {
        const auto& e = condensed.entries[i];
        if (e.second_index != static_cast<int>(i) / condensed.entries_per_second()) {
            throw ValidationError("condensed[" + std::to_string(i) + "]", "entries out of second order");
        }
        if (static_cast<int>(e.embedding.size()) != video.embedding_dim) {
            throw ValidationError("condensed[" + std::to_string(i) + "]", "embedding-dimension mismatch");
        }
    }
}

Example make_example(const datamodel::CaptionedVideo& video, const condenser::CondensedSequence& condensed) {
    check_condensed_matches(condensed, video);
    const auto targets = per_second_targets(video);
    Example example;
    example.inputs = sequence_matrix(condensed);
    example.targets.resize(static_cast<Eigen::Index>(condensed.entries.size()));
    for (std::size_t i = 0; i < condensed.entries.size(); ++i) {
        example.targets(static_cast<Eigen::Index>(i)) =
            targets[static_cast<std::size_t>(condensed.entries[i].second_index)];
    }
    return example;
}

condenser::CondensedSequence make_no_input_baseline(const condenser::CondensedSequence& condensed) {
    auto out = condensed;
    for (auto& e : out.entries) std::fill(e.embedding.begin(), e.embedding.end(), 1.0F);
    return out;
}

std::vector<Example> make_no_input_baseline(std::span<const Example> dataset) {
    std::vector<Example> out(dataset.begin(), dataset.end());
    for (auto& e : out) e.inputs.setOnes();
    return out;
}

std::vector<double> broadcast_to_frames(std::span<const double> per_entry, int entries_per_second,
                                        std::int64_t native_frames, double native_fps) {
    if (per_entry.empty()) throw ValidationError("scores", "nothing to broadcast");
    std::vector<double> out(static_cast<std::size_t>(std::max<std::int64_t>(native_frames, 0)));
    const auto last = static_cast<std::int64_t>(per_entry.size()) - 1;
    for (std::size_t k = 0; k < out.size(); ++k) {
        const auto idx = static_cast<std::int64_t>(
            std::floor(static_cast<double>(k) * entries_per_second / native_fps));
        out[k] = per_entry[static_cast<std::size_t>(std::clamp<std::int64_t>(idx, 0, last))];
    }
    return out;
}

ScorePrediction predict(const ScoringModel& model, const condenser::CondensedSequence& condensed,
                        const datamodel::CaptionedVideo& video) {
    check_condensed_matches(condensed, video);
    const Vector scores = forward(model, sequence_matrix(condensed));
    ScorePrediction out;
    out.per_second.assign(scores.data(), scores.data() + scores.size());
    out.per_frame = broadcast_to_frames(out.per_second, condensed.entries_per_second(), video.native_frame_count(),
                                        video.native_fps);
    return out;
}

}  // namespace lmvs::scorer
