#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lmvs/datamodel/video.hpp"

namespace lmvs::datamodel {

inline constexpr std::string_view kManifestFormat = "lmvs-manifest";
inline constexpr int kManifestVersion = 1;

struct DatasetManifest {
    std::string name;
    /// Video file references as written in the manifest.
    std::vector<std::filesystem::path> videos;
    int embedding_dim = 0;
    std::uint64_t feature_bytes = 0;
    /// Directory relative references are resolved against.
    std::filesystem::path base_dir;

    std::filesystem::path resolve(const std::filesystem::path& video) const;
};

struct ReportEntry {
    std::string video;
    std::string message;
};

struct ValidationReport {
    std::vector<ReportEntry> entries;

    bool clean() const { return entries.empty(); }
};

DatasetManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

/// Checks every referenced video and cross-checks `feature_bytes`. Throws
/// IoError when a referenced file cannot be read; every other problem becomes a
/// report entry.
ValidationReport validate_manifest(const DatasetManifest& manifest);

/// Loads every video of the manifest in manifest order, using up to `jobs`
/// threads.
std::vector<CaptionedVideo> load_dataset(const DatasetManifest& manifest, int jobs = 1);

}  // namespace lmvs::datamodel
