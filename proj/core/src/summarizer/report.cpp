#include "lmvs/summarizer/report.hpp"

#include "json.hpp"

#include "lmvs/error.hpp"

namespace lmvs::summarizer {

std::vector<std::pair<std::int64_t, std::int64_t>> run_length_encode(std::span<const std::uint8_t> mask) {
    std::vector<std::pair<std::int64_t, std::int64_t>> runs;
    const auto n = static_cast<std::int64_t>(mask.size());
    for (std::int64_t k = 0; k < n;) {
        if (mask[static_cast<std::size_t>(k)] == 0) {
            ++k;
            continue;
        }
        const auto start = k;
        while (k < n && mask[static_cast<std::size_t>(k)] != 0) ++k;
        runs.emplace_back(start, k - start);
    }
    return runs;
}

std::vector<std::uint8_t> run_length_decode(std::span<const std::pair<std::int64_t, std::int64_t>> runs,
                                            std::int64_t length) {
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(length), 0);
    for (const auto& [start, len] : runs) {
        if (start < 0 || len < 0 || start + len > length) throw ParseError("mask run outside the frame range");
        for (auto k = start; k < start + len; ++k) mask[static_cast<std::size_t>(k)] = 1;
    }
    return mask;
}

std::string format_summary_report(const SummaryResult& summary, const datamodel::CaptionedVideo& video,
                                  const condenser::CondensedSequence& condensed,
                                  const SummaryReportOptions& options) {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["format"] = "lmvs-summary";
    doc["format_version"] = 1;
    doc["video_id"] = video.video_id;
    doc["method"] = condenser::to_string(condensed.method);
    doc["native_frames"] = video.native_frame_count();
    doc["budget_frames"] = summary.budget_frames;
    doc["total_selected_frames"] = summary.total_selected_frames;

    ordered_json runs = ordered_json::array();
    for (const auto& [start, len] : run_length_encode(summary.frame_mask)) runs.push_back({start, len});
    doc["frame_mask_runs"] = std::move(runs);

    ordered_json shots = ordered_json::array();
    for (int id : summary.selected_shot_ids) {
        const auto start = video.shot_boundaries[static_cast<std::size_t>(id)];
        const auto end = video.shot_boundaries[static_cast<std::size_t>(id) + 1];
        shots.push_back({{"shot_id", id}, {"start_frame", start}, {"end_frame", end}});
    }
    doc["selected_shots"] = std::move(shots);

    ordered_json text = ordered_json::array();
    for (const auto& line : summary.text_summary) {
        text.push_back({{"shot_id", line.shot_id}, {"second", line.second}, {"caption", line.caption}});
    }
    doc["text_summary"] = std::move(text);

    if (options.full_captions) {
        ordered_json all = ordered_json::array();
        for (int id : summary.selected_shot_ids) {
            const auto start = video.shot_boundaries[static_cast<std::size_t>(id)];
            const auto end = video.shot_boundaries[static_cast<std::size_t>(id) + 1];
            const int first = video.second_of_native_frame(start);
            const int last = video.second_of_native_frame(end - 1);
            ordered_json captions = ordered_json::array();
            for (const auto& e : condensed.entries) {
                if (e.second_index >= first && e.second_index <= last) {
                    captions.push_back({{"second", e.second_index}, {"caption", e.text}});
                }
            }
            all.push_back({{"shot_id", id}, {"captions", std::move(captions)}});
        }
        doc["full_captions"] = std::move(all);
    }
    ordered_json meta = ordered_json::object();
    for (const auto& [k, v] : options.metadata) meta[k] = v;
    doc["metadata"] = std::move(meta);
    return doc.dump(2) + "\n";
}

}  // namespace lmvs::summarizer
