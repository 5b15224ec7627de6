#include "lmvs/summarizer/keyshot.hpp"

#include <cmath>

#include "lmvs/error.hpp"

namespace lmvs::summarizer {

ShotTable aggregate_shots(std::span<const double> frame_scores, std::span<const std::int64_t> boundaries) {
    if (boundaries.size() < 2 || boundaries.front() != 0 ||
        boundaries.back() != static_cast<std::int64_t>(frame_scores.size())) {
        throw ValidationError("shot_boundaries", "boundaries must start at 0 and end at the frame count " +
                                                     std::to_string(frame_scores.size()));
    }
    ShotTable table;
    table.shots.reserve(boundaries.size() - 1);
    for (std::size_t i = 0; i + 1 < boundaries.size(); ++i) {
        const auto start = boundaries[i];
        const auto end = boundaries[i + 1];
        if (end <= start) throw ValidationError("shot_boundaries", "boundaries must be strictly increasing");
        double sum = 0.0;
        for (auto k = start; k < end; ++k) sum += frame_scores[static_cast<std::size_t>(k)];
        table.shots.push_back({start, end, end - start, sum / static_cast<double>(end - start)});
    }
    return table;
}

std::vector<int> knapsack_select(const ShotTable& table, std::int64_t budget) {
    const std::size_t n = table.shots.size();
    const auto capacity = static_cast<std::size_t>(std::max<std::int64_t>(budget, 0));
    const std::size_t width = capacity + 1;
    // best[i * width + c]: optimum over shots i..n-1 with capacity c.
    std::vector<double> best((n + 1) * width, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        const auto& shot = table.shots[i];
        const auto w = static_cast<std::size_t>(shot.length_frames);
        const double v = shot.value * static_cast<double>(shot.length_frames);
        const double* next = &best[(i + 1) * width];
        double* cur = &best[i * width];
        for (std::size_t c = 0; c < width; ++c) {
            cur[c] = next[c];
            if (w <= c) cur[c] = std::max(cur[c], next[c - w] + v);
        }
    }
    std::vector<int> selected;
    std::size_t c = capacity;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& shot = table.shots[i];
        const auto w = static_cast<std::size_t>(shot.length_frames);
        if (w > c) continue;
        const double* next = &best[(i + 1) * width];
        const double include = next[c - w] + shot.value * static_cast<double>(shot.length_frames);
        if (include >= next[c]) {
            selected.push_back(static_cast<int>(i));
            c -= w;
        }
    }
    return selected;
}

std::int64_t budget_frames(double fraction, std::int64_t native_frames) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("budget fraction must lie in (0, 1]");
    // The epsilon absorbs binary rounding of products like 0.15 * 1000.
    return static_cast<std::int64_t>(std::floor(fraction * static_cast<double>(native_frames) + 1e-9));
}

std::vector<std::uint8_t> shots_to_mask(const ShotTable& table, std::span<const int> selected,
                                        std::int64_t native_frames) {
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(native_frames), 0);
    for (int id : selected) {
        const auto& shot = table.shots.at(static_cast<std::size_t>(id));
        for (auto k = shot.start_frame; k < shot.end_frame; ++k) mask[static_cast<std::size_t>(k)] = 1;
    }
    return mask;
}

std::vector<std::uint8_t> keyshot_mask(std::span<const double> frame_scores,
                                       std::span<const std::int64_t> boundaries, double budget_fraction) {
    const auto table = aggregate_shots(frame_scores, boundaries);
    const auto n = static_cast<std::int64_t>(frame_scores.size());
    const auto selected = knapsack_select(table, budget_frames(budget_fraction, n));
    return shots_to_mask(table, selected, n);
}

SummaryResult build_summary(const datamodel::CaptionedVideo& video, const condenser::CondensedSequence& condensed,
                            const scorer::ScorePrediction& pred, double budget_fraction) {
    const auto n = video.native_frame_count();
    if (static_cast<std::int64_t>(pred.per_frame.size()) != n) {
        throw ValidationError("prediction", "per-frame scores do not match the native frame count");
    }
    if (pred.per_second.size() != condensed.entries.size()) {
        throw ValidationError("prediction", "per-entry scores do not match the condensed sequence");
    }
    SummaryResult out;
    out.budget_frames = budget_frames(budget_fraction, n);
    const auto table = aggregate_shots(pred.per_frame, video.shot_boundaries);
    out.selected_shot_ids = knapsack_select(table, out.budget_frames);
    out.frame_mask = shots_to_mask(table, out.selected_shot_ids, n);
    for (int id : out.selected_shot_ids) {
        const auto& shot = table.shots[static_cast<std::size_t>(id)];
        out.total_selected_frames += shot.length_frames;
        const int first = video.second_of_native_frame(shot.start_frame);
        const int last = video.second_of_native_frame(shot.end_frame - 1);
        std::size_t best = condensed.entries.size();
        for (std::size_t i = 0; i < condensed.entries.size(); ++i) {
            const int s = condensed.entries[i].second_index;
            if (s < first || s > last) continue;
            if (best == condensed.entries.size() || pred.per_second[i] > pred.per_second[best]) best = i;
        }
        if (best < condensed.entries.size()) {
            out.text_summary.push_back({id, condensed.entries[best].second_index, condensed.entries[best].text});
        }
    }
    return out;
}

}  // namespace lmvs::summarizer
