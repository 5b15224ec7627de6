#include "lmvs/datamodel/interchange.hpp"

#include "json.hpp"

#include "lmvs/datamodel/normalize.hpp"
#include "lmvs/error.hpp"
#include "lmvs/util/atomic_file.hpp"
#include "lmvs/util/base64.hpp"
#include "json_fields.hpp"

namespace lmvs::datamodel {
namespace {

using nlohmann::ordered_json;
using detail::require;
using detail::require_int;
using detail::require_number;
using detail::require_string;

ordered_json condensed_to_json(const condenser::CondensedSequence& seq) {
    ordered_json entries = ordered_json::array();
    for (const auto& e : seq.entries) {
        entries.push_back({{"second", e.second_index},
                           {"frame", e.source.frame},
                           {"caption", e.source.caption},
                           {"text", e.text},
                           {"embedding", util::encode_f32(e.embedding)}});
    }
    return {{"method", condenser::to_string(seq.method)}, {"seed", seq.seed}, {"entries", std::move(entries)}};
}

condenser::CondensedSequence condensed_from_json(const ordered_json& j, const std::string& path) {
    condenser::CondensedSequence seq;
    const auto method_name = require_string(j, "method", path);
    const auto method = condenser::parse_condense_method(method_name);
    if (!method) throw ParseError(path + ".method: unknown method '" + method_name + "'");
    seq.method = *method;
    const auto& seed = require(j, "seed", path);
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0)) {
        throw ParseError(path + ".seed: expected a non-negative integer");
    }
    seq.seed = seed.get<std::uint64_t>();
    const auto& entries = require(j, "entries", path);
    if (!entries.is_array()) throw ParseError(path + ".entries: expected an array");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string epath = path + ".entries[" + std::to_string(i) + "]";
        condenser::CondensedEntry e;
        e.second_index = static_cast<int>(require_int(entries[i], "second", epath));
        e.source.frame = static_cast<int>(require_int(entries[i], "frame", epath));
        e.source.caption = static_cast<int>(require_int(entries[i], "caption", epath));
        e.text = require_string(entries[i], "text", epath);
        try {
            e.embedding = util::decode_f32(require_string(entries[i], "embedding", epath));
        } catch (const ParseError& err) {
            throw ParseError(epath + ".embedding: " + err.what());
        }
        seq.entries.push_back(std::move(e));
    }
    return seq;
}

}  // namespace

std::string to_interchange(const CaptionedVideo& video) {
    ordered_json doc;
    doc["format"] = kInterchangeFormat;
    doc["format_version"] = kInterchangeVersion;
    doc["video_id"] = video.video_id;
    doc["category"] = video.category ? ordered_json(*video.category) : ordered_json(nullptr);
    doc["fps_sampled"] = video.fps_sampled;
    doc["captions_per_frame"] = video.captions_per_frame;
    doc["native_fps"] = video.native_fps;
    doc["duration_seconds"] = video.duration_seconds;
    doc["embedding_dim"] = video.embedding_dim;

    ordered_json frames = ordered_json::array();
    for (const auto& frame : video.frames) {
        ordered_json captions = ordered_json::array();
        for (const auto& caption : frame.captions) {
            captions.push_back({{"text", caption.text}, {"embedding", util::encode_f32(caption.embedding)}});
        }
        frames.push_back({{"frame_index", frame.frame_index}, {"captions", std::move(captions)}});
    }
    doc["frames"] = std::move(frames);

    ordered_json truth = ordered_json::array();
    for (const auto& user : video.ground_truth) {
        truth.push_back({{"user_id", user.user_id}, {"raw_scores", user.raw_scores}});
    }
    doc["ground_truth"] = std::move(truth);
    doc["shot_boundaries"] = video.shot_boundaries;

    ordered_json condensed = ordered_json::object();
    for (const auto& [key, seq] : video.condensed) condensed[key] = condensed_to_json(seq);
    doc["condensed"] = std::move(condensed);
    return doc.dump(1) + "\n";
}

CaptionedVideo from_interchange(std::string_view text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("interchange file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("interchange document must be a JSON object");
    if (require_string(doc, "format", "") != kInterchangeFormat) {
        throw ParseError("format: not an lmvs interchange file");
    }
    const auto version = require_int(doc, "format_version", "");
    if (version != kInterchangeVersion) {
        throw ParseError("format_version: unsupported version " + std::to_string(version));
    }

    CaptionedVideo video;
    video.video_id = require_string(doc, "video_id", "");
    const auto& category = require(doc, "category", "");
    if (category.is_string()) {
        video.category = category.get<std::string>();
    } else if (!category.is_null()) {
        throw ParseError("category: expected a string or null");
    }
    video.fps_sampled = static_cast<int>(require_int(doc, "fps_sampled", ""));
    video.captions_per_frame = static_cast<int>(require_int(doc, "captions_per_frame", ""));
    video.native_fps = require_number(doc, "native_fps", "");
    video.duration_seconds = static_cast<int>(require_int(doc, "duration_seconds", ""));
    video.embedding_dim = static_cast<int>(require_int(doc, "embedding_dim", ""));

    const auto& frames = require(doc, "frames", "");
    if (!frames.is_array()) throw ParseError("frames: expected an array");
    video.frames.reserve(frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const std::string path = "frames[" + std::to_string(i) + "]";
        FrameCaptions frame;
        frame.frame_index = static_cast<int>(require_int(frames[i], "frame_index", path));
        const auto& captions = require(frames[i], "captions", path);
        if (!captions.is_array()) throw ParseError(path + ".captions: expected an array");
        for (std::size_t c = 0; c < captions.size(); ++c) {
            const std::string cpath = path + ".captions[" + std::to_string(c) + "]";
            Caption caption;
            caption.text = require_string(captions[c], "text", cpath);
            try {
                caption.embedding = util::decode_f32(require_string(captions[c], "embedding", cpath));
            } catch (const ParseError& err) {
                throw ParseError(cpath + ".embedding: " + err.what());
            }
            frame.captions.push_back(std::move(caption));
        }
        video.frames.push_back(std::move(frame));
    }

    const auto& truth = require(doc, "ground_truth", "");
    if (!truth.is_array()) throw ParseError("ground_truth: expected an array");
    for (std::size_t u = 0; u < truth.size(); ++u) {
        const std::string path = "ground_truth[" + std::to_string(u) + "]";
        UserAnnotation user;
        user.user_id = require_string(truth[u], "user_id", path);
        const auto& raw = require(truth[u], "raw_scores", path);
        if (!raw.is_array()) throw ParseError(path + ".raw_scores: expected an array");
        user.raw_scores.reserve(raw.size());
        for (const auto& x : raw) {
            if (!x.is_number()) throw ParseError(path + ".raw_scores: expected numbers");
            user.raw_scores.push_back(x.get<double>());
        }
        video.ground_truth.push_back(std::move(user));
    }

    const auto& boundaries = require(doc, "shot_boundaries", "");
    if (!boundaries.is_array()) throw ParseError("shot_boundaries: expected an array");
    for (const auto& b : boundaries) {
        if (!b.is_number_integer()) throw ParseError("shot_boundaries: expected integers");
        video.shot_boundaries.push_back(b.get<std::int64_t>());
    }

    if (doc.contains("condensed")) {
        const auto& condensed = doc["condensed"];
        if (!condensed.is_object()) throw ParseError("condensed: expected an object");
        for (const auto& [key, section] : condensed.items()) {
            video.condensed[key] = condensed_from_json(section, "condensed." + key);
        }
    }

    for (std::size_t u = 0; u < video.ground_truth.size(); ++u) {
        auto& user = video.ground_truth[u];
        try {
            user.normalized_scores = user.raw_scores.empty() ? std::vector<double>{}
                                                              : normalize_scores(user.raw_scores);
        } catch (const ValidationError& e) {
            throw ValidationError("ground_truth[" + std::to_string(u) + "].raw_scores", e.what());
        }
    }
    validate(video);
    return video;
}

CaptionedVideo load_captioned_video(const std::filesystem::path& path) {
    return from_interchange(util::read_file(path));
}

void save_captioned_video(const std::filesystem::path& path, const CaptionedVideo& video) {
    util::write_file_atomic(path, to_interchange(video));
}

}  // namespace lmvs::datamodel
