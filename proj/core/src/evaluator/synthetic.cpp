#include "lmvs/evaluator/synthetic.hpp"

#include <array>
#include <cmath>
#include <cstdio>

#include "lmvs/datamodel/interchange.hpp"
#include "lmvs/datamodel/manifest.hpp"
#include "lmvs/datamodel/normalize.hpp"
#include "lmvs/error.hpp"
#include "lmvs/rng.hpp"

namespace lmvs::evaluator {
namespace {

constexpr std::array<std::string_view, 8> kSubjects = {
    "a man", "a woman", "a group of people", "a child", "a dog", "a cyclist", "a crowd", "a chef"};
constexpr std::array<std::string_view, 4> kActions = {
    "standing in a quiet room", "walking down a street", "riding a bike over a ramp", "flying through the air"};
constexpr std::array<std::string_view, 4> kOutliers = {
    "a blurry photo of a skateboard", "a close up of a wall", "a black screen with white text",
    "a picture of a sign"};
constexpr std::array<std::string_view, 3> kCategories = {"BT", "PK", "PR"};

std::vector<double> gaussian_vector(Rng& rng, int dim) {
    std::vector<double> v(static_cast<std::size_t>(dim));
    for (auto& x : v) x = rng.normal();
    return v;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::vector<float> to_float(const std::vector<double>& v) { return {v.begin(), v.end()}; }

/// Random vector orthogonal to `base`, scaled to its norm.
std::vector<double> orthogonal_outlier(Rng& rng, const std::vector<double>& base) {
    const double base_norm2 = dot(base, base);
    for (;;) {
        auto o = gaussian_vector(rng, static_cast<int>(base.size()));
        const double proj = dot(o, base) / base_norm2;
        for (std::size_t i = 0; i < o.size(); ++i) o[i] -= proj * base[i];
        const double norm = std::sqrt(dot(o, o));
        if (norm < 1e-6) continue;
        const double scale = std::sqrt(base_norm2) / norm;
        for (auto& x : o) x *= scale;
        return o;
    }
}

SyntheticVideo generate_one(const SyntheticSpec& spec, const std::vector<double>& direction, int index) {
    Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(index) + 1));
    SyntheticVideo out;
    auto& v = out.video;
    char id[32];
    std::snprintf(id, sizeof(id), "synthetic_%03d", index);
    v.video_id = id;
    v.category = std::string(kCategories[static_cast<std::size_t>(index) % kCategories.size()]);
    v.fps_sampled = spec.fps_sampled;
    v.captions_per_frame = spec.captions_per_frame;
    v.duration_seconds = spec.seconds;
    v.native_fps = spec.native_fps;
    v.embedding_dim = spec.dim;

    // Shots: whole seconds, lengths uniform in [min, max].
    std::vector<int> shot_of_second;
    v.shot_boundaries.push_back(0);
    int shot = 0;
    for (int s = 0; s < spec.seconds;) {
        const auto span = spec.min_shot_seconds +
                          static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.max_shot_seconds -
                                                                                spec.min_shot_seconds + 1)));
        const int end = std::min(spec.seconds, s + span);
        for (; s < end; ++s) shot_of_second.push_back(shot);
        v.shot_boundaries.push_back(
            static_cast<std::int64_t>(std::llround(static_cast<double>(end) * spec.native_fps)));
        ++shot;
    }
    v.shot_boundaries.back() = static_cast<std::int64_t>(std::floor(spec.seconds * spec.native_fps + 1e-9));

    // Planted per-second embeddings: a shot anchor plus per-second jitter.
    std::vector<std::vector<double>> anchors;
    for (int s = 0; s < shot; ++s) anchors.push_back(gaussian_vector(rng, spec.dim));
    std::vector<std::vector<double>> planted;
    for (int s = 0; s < spec.seconds; ++s) {
        auto e = anchors[static_cast<std::size_t>(shot_of_second[static_cast<std::size_t>(s)])];
        for (auto& x : e) x += 0.5 * rng.normal();
        // Round through float so captions and the planted vector agree exactly.
        for (auto& x : e) x = static_cast<float>(x);
        const double latent = 1.0 / (1.0 + std::exp(-spec.gain * dot(direction, e)));
        out.latent.push_back(latent);
        out.planted.push_back(to_float(e));
        planted.push_back(std::move(e));
    }

    const std::size_t n_frames = static_cast<std::size_t>(spec.seconds) * spec.fps_sampled;
    for (std::size_t f = 0; f < n_frames; ++f) {
        const auto second = f / static_cast<std::size_t>(spec.fps_sampled);
        const auto& base = planted[second];
        const double latent = out.latent[second];
        const auto subject = kSubjects[static_cast<std::size_t>(shot_of_second[second]) % kSubjects.size()];
        const auto action = kActions[std::min<std::size_t>(kActions.size() - 1,
                                                           static_cast<std::size_t>(latent * kActions.size()))];
        datamodel::FrameCaptions frame;
        frame.frame_index = static_cast<int>(f);
        const bool has_outlier = rng.uniform() < spec.outlier_prob;
        const int outlier_slot = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.captions_per_frame)));
        for (int c = 0; c < spec.captions_per_frame; ++c) {
            datamodel::Caption caption;
            if (has_outlier && c == outlier_slot && spec.captions_per_frame > 1) {
                caption.text = std::string(kOutliers[rng.below(kOutliers.size())]);
                caption.embedding = to_float(orthogonal_outlier(rng, base));
            } else {
                caption.text = std::string(subject) + " " + std::string(action);
                auto e = base;
                if (spec.caption_noise > 0.0) {
                    for (auto& x : e) x += spec.caption_noise * rng.normal();
                }
                caption.embedding = to_float(e);
            }
            frame.captions.push_back(std::move(caption));
        }
        v.frames.push_back(std::move(frame));
    }

    const auto native_frames = static_cast<std::size_t>(v.native_frame_count());
    for (int u = 0; u < spec.n_users; ++u) {
        datamodel::UserAnnotation user;
        user.user_id = "user_" + std::to_string(u);
        user.raw_scores.resize(native_frames);
        for (std::size_t k = 0; k < native_frames; ++k) {
            const double latent = out.latent[static_cast<std::size_t>(v.second_of_native_frame(
                static_cast<std::int64_t>(k)))];
            const double noise = spec.annotation_noise > 0.0 ? spec.annotation_noise * rng.normal() : 0.0;
            user.raw_scores[k] = 1.0 + 4.0 * (latent + noise);
        }
        v.ground_truth.push_back(std::move(user));
    }
    datamodel::normalize_ground_truth(v);
    return out;
}

}  // namespace

void SyntheticSpec::validate() const {
    if (n_videos < 1) throw ConfigError("n_videos must be >= 1");
    if (seconds < 1) throw ConfigError("seconds must be >= 1");
    if (dim < 2) throw ConfigError("dim must be >= 2");
    if (fps_sampled < 1 || captions_per_frame < 1) throw ConfigError("fps_sampled and captions_per_frame must be >= 1");
    if (!(native_fps >= 1.0)) throw ConfigError("native_fps must be >= 1");
    if (n_users < 1) throw ConfigError("n_users must be >= 1");
    if (annotation_noise < 0.0 || caption_noise < 0.0) throw ConfigError("noise levels must be non-negative");
    if (!(outlier_prob >= 0.0 && outlier_prob <= 1.0)) throw ConfigError("outlier_prob must lie in [0, 1]");
    if (min_shot_seconds < 1 || max_shot_seconds < min_shot_seconds) throw ConfigError("invalid shot length range");
}

std::vector<SyntheticVideo> generate_synthetic_videos(const SyntheticSpec& spec) {
    spec.validate();
    Rng rng(mix_seed(spec.seed, 0));
    auto direction = gaussian_vector(rng, spec.dim);
    const double norm = std::sqrt(dot(direction, direction));
    for (auto& x : direction) x /= norm;
    std::vector<SyntheticVideo> videos;
    videos.reserve(static_cast<std::size_t>(spec.n_videos));
    for (int i = 0; i < spec.n_videos; ++i) videos.push_back(generate_one(spec, direction, i));
    return videos;
}

std::filesystem::path write_synthetic_dataset(const std::filesystem::path& out_dir, const SyntheticSpec& spec) {
    const auto videos = generate_synthetic_videos(spec);
    datamodel::DatasetManifest manifest;
    manifest.name = "synthetic";
    manifest.embedding_dim = spec.dim;
    manifest.base_dir = out_dir;
    for (const auto& sv : videos) {
        const std::filesystem::path file = sv.video.video_id + ".json";
        datamodel::save_captioned_video(out_dir / file, sv.video);
        manifest.videos.push_back(file);
        manifest.feature_bytes += datamodel::embedding_payload_bytes(sv.video);
    }
    const auto path = out_dir / "manifest.json";
    datamodel::save_manifest(path, manifest);
    return path;
}

}  // namespace lmvs::evaluator
