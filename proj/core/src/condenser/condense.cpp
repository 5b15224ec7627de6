#include "lmvs/condenser/condense.hpp"

#include "lmvs/condenser/kmeans.hpp"
#include "lmvs/error.hpp"
#include "lmvs/rng.hpp"
#include "lmvs/util/parallel.hpp"

namespace lmvs::condenser {

EmbeddingMatrix second_window_matrix(const datamodel::CaptionedVideo& video, int second) {
    const auto frames = video.second_window(second);
    EmbeddingMatrix window;
    const Eigen::Index rows = static_cast<Eigen::Index>(frames.size()) * video.captions_per_frame;
    window.rows.resize(rows, video.embedding_dim);
    Eigen::Index r = 0;
    for (int f = frames.begin; f < frames.end; ++f) {
        const auto& captions = video.frames[static_cast<std::size_t>(f)].captions;
        for (int c = 0; c < static_cast<int>(captions.size()); ++c) {
            const auto& e = captions[static_cast<std::size_t>(c)].embedding;
            for (Eigen::Index j = 0; j < window.rows.cols(); ++j) {
                window.rows(r, j) = e[static_cast<std::size_t>(j)];
            }
            window.source_indices.push_back({f, c});
            ++r;
        }
    }
    return window;
}

namespace {

CondensedEntry entry_for(const datamodel::CaptionedVideo& video, int second, SourceIndex source) {
    const auto& caption =
        video.frames[static_cast<std::size_t>(source.frame)].captions[static_cast<std::size_t>(source.caption)];
    return {second, caption.text, caption.embedding, source};
}

}  // namespace

CondensedSequence condense_video(const datamodel::CaptionedVideo& video, CondenseMethod method,
                                 std::uint64_t seed, int jobs) {
    CondensedSequence seq;
    seq.method = method;
    seq.seed = seed;
    const int per_second = seq.entries_per_second();
    seq.entries.resize(static_cast<std::size_t>(video.duration_seconds) * per_second);

    util::parallel_for(static_cast<std::size_t>(video.duration_seconds), jobs, [&](std::size_t s) {
        const int second = static_cast<int>(s);
        if (method == CondenseMethod::unfiltered) {
            const auto frames = video.second_window(second);
            for (int j = 0; j < 2; ++j) {
                const int frame = frames.begin + j * frames.size() / 2;
                seq.entries[s * 2 + static_cast<std::size_t>(j)] = entry_for(video, second, {frame, 0});
            }
            return;
        }
        const auto window = second_window_matrix(video, second);
        if (window.size() == 0) {
            throw ValidationError("frames", "second " + std::to_string(second) + " has no frames");
        }
        Eigen::Index row = 0;
        if (method == CondenseMethod::cosine) {
            row = select_by_similarity(cosine_similarity_matrix(window));
        } else if (window.size() >= 2) {
            KMeansOptions options;
            options.seed = mix_seed(seed, s);
            row = select_by_centroid(window, kmeans_partition(window, options));
        }
        seq.entries[s] = entry_for(video, second, window.source_indices[static_cast<std::size_t>(row)]);
    });
    return seq;
}

}  // namespace lmvs::condenser
