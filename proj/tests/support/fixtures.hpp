#pragma once

#include <atomic>
#include <filesystem>
#include <string>

#include <unistd.h>

#include "lmvs/datamodel/video.hpp"
#include "lmvs/evaluator/synthetic.hpp"
#include "lmvs/rng.hpp"

namespace lmvs::testing {

inline evaluator::SyntheticSpec small_spec(std::uint64_t seed = 11) {
    evaluator::SyntheticSpec spec;
    spec.n_videos = 1;
    spec.seconds = 10;
    spec.dim = 8;
    spec.seed = seed;
    return spec;
}

/// A valid 10 s video with 8-dimensional embeddings.
inline datamodel::CaptionedVideo small_video(std::uint64_t seed = 11) {
    return evaluator::generate_synthetic_videos(small_spec(seed)).front().video;
}

/// Fresh directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("lmvs_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::vector<double> random_vector(Rng& rng, int dim) {
    std::vector<double> v(static_cast<std::size_t>(dim));
    for (auto& x : v) x = rng.normal();
    return v;
}

}  // namespace lmvs::testing
