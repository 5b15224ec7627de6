#include "lmvs/datamodel/video.hpp"

#include <algorithm>
#include <cmath>

#include "lmvs/datamodel/normalize.hpp"
#include "lmvs/error.hpp"

namespace lmvs::datamodel {
namespace {

std::string indexed(std::string_view base, std::size_t i) {
    return std::string(base) + "[" + std::to_string(i) + "]";
}

class IssueSink {
public:
    void add(std::string path, std::string message) {
        issues_.push_back({std::move(path), std::move(message)});
    }
    std::vector<ValidationIssue> take() { return std::move(issues_); }

private:
    std::vector<ValidationIssue> issues_;
};

void check_header(const CaptionedVideo& v, IssueSink& sink) {
    if (v.video_id.empty()) sink.add("video_id", "must be non-empty");
    if (v.fps_sampled < 1) sink.add("fps_sampled", "must be >= 1");
    if (v.captions_per_frame < 1) sink.add("captions_per_frame", "must be >= 1");
    if (v.duration_seconds < 1) sink.add("duration_seconds", "must be a positive integer");
    if (!(std::isfinite(v.native_fps) && v.native_fps > 0.0)) sink.add("native_fps", "must be positive");
    if (v.embedding_dim < 1) sink.add("embedding_dim", "must be >= 1");
}

void check_frames(const CaptionedVideo& v, IssueSink& sink) {
    const auto n = static_cast<std::int64_t>(v.frames.size());
    const std::int64_t full = static_cast<std::int64_t>(v.fps_sampled) * v.duration_seconds;
    const std::int64_t floor_count = static_cast<std::int64_t>(v.fps_sampled) * (v.duration_seconds - 1);
    if (n > full || n <= floor_count) {
        sink.add("frames", "frame count " + std::to_string(n) + " inconsistent with fps_sampled x duration_seconds = " +
                               std::to_string(full));
    }
    for (std::size_t i = 0; i < v.frames.size(); ++i) {
        const auto& frame = v.frames[i];
        const std::string path = indexed("frames", i);
        if (frame.frame_index != static_cast<int>(i)) {
            sink.add(path + ".frame_index", "expected " + std::to_string(i) + ", found " +
                                                std::to_string(frame.frame_index));
        }
        if (static_cast<int>(frame.captions.size()) != v.captions_per_frame) {
            sink.add(path + ".captions", "captions_per_frame violation at frame " + std::to_string(i) +
                                             " (expected " + std::to_string(v.captions_per_frame) +
                                             ", found " + std::to_string(frame.captions.size()) + ")");
        }
        for (std::size_t c = 0; c < frame.captions.size(); ++c) {
            const auto& caption = frame.captions[c];
            const std::string cpath = indexed(path + ".captions", c);
            if (caption.text.empty()) sink.add(cpath + ".text", "caption text is empty");
            if (static_cast<int>(caption.embedding.size()) != v.embedding_dim) {
                sink.add(cpath + ".embedding", "embedding-dimension mismatch (expected " +
                                                   std::to_string(v.embedding_dim) + ", found " +
                                                   std::to_string(caption.embedding.size()) + ")");
                continue;
            }
            double norm2 = 0.0;
            bool finite = true;
            for (float x : caption.embedding) {
                finite = finite && std::isfinite(x);
                norm2 += static_cast<double>(x) * x;
            }
            if (!finite) {
                sink.add(cpath + ".embedding", "non-finite embedding value");
            } else if (norm2 == 0.0) {
                sink.add(cpath + ".embedding", "zero-norm embedding");
            }
        }
    }
}

void check_shots(const CaptionedVideo& v, IssueSink& sink) {
    const auto& b = v.shot_boundaries;
    if (b.size() < 2) {
        sink.add("shot_boundaries", "needs at least two boundaries");
        return;
    }
    if (b.front() != 0) sink.add("shot_boundaries[0]", "first boundary must be 0");
    for (std::size_t i = 1; i < b.size(); ++i) {
        if (b[i] <= b[i - 1]) {
            sink.add(indexed("shot_boundaries", i), "boundaries must be strictly increasing");
            break;
        }
    }
    if (v.native_fps > 0.0 && v.duration_seconds >= 1) {
        const double seconds = static_cast<double>(b.back()) / v.native_fps;
        if (seconds > v.duration_seconds + 1e-9 || seconds <= v.duration_seconds - 1 + 1e-9) {
            sink.add("shot_boundaries", "native frame count " + std::to_string(b.back()) +
                                            " inconsistent with duration_seconds at native_fps");
        }
    }
}

void check_ground_truth(const CaptionedVideo& v, IssueSink& sink) {
    if (v.ground_truth.empty()) sink.add("ground_truth", "needs at least one annotator");
    const auto n = static_cast<std::size_t>(std::max<std::int64_t>(v.native_frame_count(), 0));
    for (std::size_t u = 0; u < v.ground_truth.size(); ++u) {
        const auto& user = v.ground_truth[u];
        const std::string path = indexed("ground_truth", u);
        if (user.user_id.empty()) sink.add(path + ".user_id", "must be non-empty");
        if (user.raw_scores.size() != n) {
            sink.add(path + ".raw_scores", "length " + std::to_string(user.raw_scores.size()) +
                                               " != native frame count " + std::to_string(n));
        }
        if (!std::all_of(user.raw_scores.begin(), user.raw_scores.end(),
                         [](double x) { return std::isfinite(x); })) {
            sink.add(path + ".raw_scores", "non-finite score");
        }
        if (user.normalized_scores.size() != user.raw_scores.size() ||
            !std::all_of(user.normalized_scores.begin(), user.normalized_scores.end(),
                         [](double x) { return x >= 0.0 && x <= 1.0; })) {
            sink.add(path + ".normalized_scores", "must hold one value in [0,1] per raw score");
        }
    }
}

void check_condensed(const CaptionedVideo& v, IssueSink& sink) {
    for (const auto& [key, seq] : v.condensed) {
        const std::string path = "condensed." + key;
        if (key != condenser::to_string(seq.method)) {
            sink.add(path, "section key does not match method");
        }
        const auto expected = static_cast<std::size_t>(v.duration_seconds) * seq.entries_per_second();
        if (seq.entries.size() != expected) {
            sink.add(path, "expected " + std::to_string(expected) + " entries, found " +
                               std::to_string(seq.entries.size()));
            continue;
        }
        for (std::size_t i = 0; i < seq.entries.size(); ++i) {
            const auto& e = seq.entries[i];
            const std::string epath = indexed(path, i);
            const int second = static_cast<int>(i) / seq.entries_per_second();
            if (e.second_index != second) sink.add(epath + ".second", "entries must be ordered by second");
            if (static_cast<int>(e.embedding.size()) != v.embedding_dim) {
                sink.add(epath + ".embedding", "embedding-dimension mismatch");
            }
            const auto window = v.second_window(second);
            if (e.source.frame < window.begin || e.source.frame >= window.end || e.source.caption < 0 ||
                e.source.caption >= v.captions_per_frame) {
                sink.add(epath + ".source", "source index outside the second's window");
            }
        }
    }
}

}  // namespace

FrameRange CaptionedVideo::second_window(int second) const {
    const int n = static_cast<int>(frames.size());
    const int begin = std::min(second * fps_sampled, n);
    const int end = std::min((second + 1) * fps_sampled, n);
    return {begin, end};
}

int CaptionedVideo::second_of_native_frame(std::int64_t frame) const {
    const auto second = static_cast<std::int64_t>(std::floor(static_cast<double>(frame) / native_fps));
    return static_cast<int>(std::clamp<std::int64_t>(second, 0, duration_seconds - 1));
}

std::vector<double> CaptionedVideo::mean_normalized_scores() const {
    std::vector<double> mean(static_cast<std::size_t>(native_frame_count()), 0.0);
    if (ground_truth.empty()) return mean;
    for (const auto& user : ground_truth) {
        for (std::size_t k = 0; k < mean.size() && k < user.normalized_scores.size(); ++k) {
            mean[k] += user.normalized_scores[k];
        }
    }
    for (auto& x : mean) x /= static_cast<double>(ground_truth.size());
    return mean;
}

std::vector<ValidationIssue> collect_violations(const CaptionedVideo& video) {
    IssueSink sink;
    check_header(video, sink);
    check_frames(video, sink);
    check_shots(video, sink);
    check_ground_truth(video, sink);
    check_condensed(video, sink);
    return sink.take();
}

void validate(const CaptionedVideo& video) {
    auto issues = collect_violations(video);
    if (!issues.empty()) {
        throw ValidationError(std::move(issues.front().field_path), issues.front().message);
    }
}

void normalize_ground_truth(CaptionedVideo& video) {
    for (auto& user : video.ground_truth) {
        user.normalized_scores =
            user.raw_scores.empty() ? std::vector<double>{} : normalize_scores(user.raw_scores);
    }
}

std::uint64_t embedding_payload_bytes(const CaptionedVideo& video) {
    std::uint64_t count = 0;
    for (const auto& frame : video.frames) {
        for (const auto& caption : frame.captions) count += caption.embedding.size();
    }
    return count * sizeof(float);
}

}  // namespace lmvs::datamodel
