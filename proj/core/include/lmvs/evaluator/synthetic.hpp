#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "lmvs/datamodel/video.hpp"

namespace lmvs::evaluator {

/// Parameters of the planted-signal generator. Each second carries a latent
/// embedding e; its importance is sigmoid(gain * w.e) for a dataset-wide random
/// unit vector w. Captions are noisy copies of e, except that each frame holds
/// one outlier caption (orthogonal to e) with probability `outlier_prob`.
struct SyntheticSpec {
    int n_videos = 8;
    int seconds = 60;
    int dim = 16;
    int fps_sampled = 6;
    int captions_per_frame = 3;
    double native_fps = 30.0;
    int n_users = 3;
    /// Per-frame Gaussian noise on each annotator's latent score.
    double annotation_noise = 0.05;
    /// Gaussian noise on non-outlier caption embeddings, relative to unit scale.
    double caption_noise = 0.05;
    double outlier_prob = 0.3;
    double gain = 2.0;
    int min_shot_seconds = 2;
    int max_shot_seconds = 6;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SyntheticVideo {
    datamodel::CaptionedVideo video;
    /// Planted per-second embedding before caption noise.
    std::vector<std::vector<float>> planted;
    /// Latent importance per second, in (0, 1).
    std::vector<double> latent;
};

std::vector<SyntheticVideo> generate_synthetic_videos(const SyntheticSpec& spec);

/// Writes one interchange file per video plus `manifest.json` into `out_dir`;
/// returns the manifest path.
std::filesystem::path write_synthetic_dataset(const std::filesystem::path& out_dir, const SyntheticSpec& spec);

}  // namespace lmvs::evaluator
