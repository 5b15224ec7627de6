#include "lmvs/evaluator/size_report.hpp"

#include <algorithm>
#include <cstdio>

#include "lmvs/error.hpp"

namespace lmvs::evaluator {

SizeReport size_report(std::span<const std::pair<std::string, double>> entries, const std::string& baseline_label) {
    const auto base = std::find_if(entries.begin(), entries.end(),
                                   [&](const auto& e) { return e.first == baseline_label; });
    if (base == entries.end()) throw ConfigError("unknown baseline label '" + baseline_label + "'");
    if (!(base->second > 0.0)) throw ConfigError("baseline size must be positive");
    SizeReport report;
    report.baseline = baseline_label;
    for (const auto& [label, mb] : entries) {
        report.entries.push_back({label, mb, (mb - base->second) / base->second * 100.0});
    }
    return report;
}

std::string format_size_report(const SizeReport& report) {
    std::size_t width = std::string_view("Method").size();
    for (const auto& e : report.entries) width = std::max(width, e.label.size());
    std::string out;
    char line[256];
    std::snprintf(line, sizeof(line), "%-*s  %15s  %26s\n", static_cast<int>(width), "Method", "Input Size (MB)",
                  "Input Size Difference (%)");
    out += line;
    for (const auto& e : report.entries) {
        std::snprintf(line, sizeof(line), "%-*s  %15.2f  %26.2f\n", static_cast<int>(width), e.label.c_str(),
                      e.megabytes, e.difference_percent);
        out += line;
    }
    out += "# baseline: " + report.baseline + "\n";
    return out;
}

double to_megabytes(std::uint64_t bytes) { return static_cast<double>(bytes) / 1e6; }

std::vector<std::pair<std::string, double>> dataset_input_sizes(std::span<const datamodel::CaptionedVideo> videos) {
    std::uint64_t per_second = 0;
    std::uint64_t all = 0;
    for (const auto& v : videos) {
        per_second += static_cast<std::uint64_t>(v.duration_seconds) * static_cast<std::uint64_t>(v.embedding_dim) *
                      sizeof(float);
        all += datamodel::embedding_payload_bytes(v);
    }
    return {{"LMVS", to_megabytes(per_second)},
            {"LMVS_unf", to_megabytes(2 * per_second)},
            {"No Input", to_megabytes(per_second)},
            {"All captions", to_megabytes(all)}};
}

}  // namespace lmvs::evaluator
