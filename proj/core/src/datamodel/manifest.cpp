#include "lmvs/datamodel/manifest.hpp"

#include <fstream>

#include "json.hpp"

#include "lmvs/datamodel/interchange.hpp"
#include "lmvs/error.hpp"
#include "lmvs/util/atomic_file.hpp"
#include "lmvs/util/parallel.hpp"
#include "json_fields.hpp"

namespace lmvs::datamodel {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

fs::path DatasetManifest::resolve(const fs::path& video) const {
    return video.is_absolute() ? video : base_dir / video;
}

DatasetManifest load_manifest(const fs::path& path) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(util::read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": manifest is not valid JSON: " + e.what());
    }
    if (!doc.is_object() || detail::require_string(doc, "format", "") != kManifestFormat) {
        throw ParseError(path.string() + ": not an lmvs manifest");
    }
    if (detail::require_int(doc, "format_version", "") != kManifestVersion) {
        throw ParseError(path.string() + ": unsupported manifest version");
    }
    DatasetManifest manifest;
    manifest.name = detail::require_string(doc, "name", "");
    manifest.embedding_dim = static_cast<int>(detail::require_int(doc, "embedding_dim", ""));
    const auto bytes = detail::require_int(doc, "feature_bytes", "");
    if (bytes < 0) throw ParseError("feature_bytes: must be non-negative");
    manifest.feature_bytes = static_cast<std::uint64_t>(bytes);
    const auto& videos = detail::require(doc, "videos", "");
    if (!videos.is_array()) throw ParseError("videos: expected an array");
    for (const auto& v : videos) {
        if (!v.is_string()) throw ParseError("videos: expected file paths");
        manifest.videos.emplace_back(v.get<std::string>());
    }
    manifest.base_dir = path.parent_path();
    return manifest;
}

void save_manifest(const fs::path& path, const DatasetManifest& manifest) {
    ordered_json doc;
    doc["format"] = kManifestFormat;
    doc["format_version"] = kManifestVersion;
    doc["name"] = manifest.name;
    doc["embedding_dim"] = manifest.embedding_dim;
    doc["feature_bytes"] = manifest.feature_bytes;
    ordered_json videos = ordered_json::array();
    for (const auto& v : manifest.videos) videos.push_back(v.generic_string());
    doc["videos"] = std::move(videos);
    util::write_file_atomic(path, doc.dump(2) + "\n");
}

ValidationReport validate_manifest(const DatasetManifest& manifest) {
    ValidationReport report;
    std::uint64_t total_bytes = 0;
    bool all_parsed = true;
    for (const auto& ref : manifest.videos) {
        const auto path = manifest.resolve(ref);
        const std::string label = ref.generic_string();
        const std::string text = util::read_file(path);
        try {
            auto video = from_interchange(text);
            total_bytes += embedding_payload_bytes(video);
            if (video.embedding_dim != manifest.embedding_dim) {
                report.entries.push_back({label, "embedding_dim " + std::to_string(video.embedding_dim) +
                                                     " differs from manifest " +
                                                     std::to_string(manifest.embedding_dim)});
            }
        } catch (const ValidationError& e) {
            report.entries.push_back({label, e.what()});
            all_parsed = false;
        } catch (const ParseError& e) {
            report.entries.push_back({label, e.what()});
            all_parsed = false;
        }
    }
    // Payload sizes are only known for files that parsed.
    if (all_parsed && total_bytes != manifest.feature_bytes) {
        report.entries.push_back({"", "feature_bytes mismatch: manifest says " +
                                          std::to_string(manifest.feature_bytes) + ", videos hold " +
                                          std::to_string(total_bytes)});
    }
    return report;
}

std::vector<CaptionedVideo> load_dataset(const DatasetManifest& manifest, int jobs) {
    std::vector<CaptionedVideo> videos(manifest.videos.size());
    util::parallel_for(videos.size(), jobs, [&](std::size_t i) {
        videos[i] = load_captioned_video(manifest.resolve(manifest.videos[i]));
    });
    return videos;
}

}  // namespace lmvs::datamodel
