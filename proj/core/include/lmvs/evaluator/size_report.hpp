#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lmvs/datamodel/video.hpp"

namespace lmvs::evaluator {

struct SizeEntry {
    std::string label;
    double megabytes = 0.0;
    /// (megabytes - baseline) / baseline * 100.
    double difference_percent = 0.0;
};

struct SizeReport {
    std::string baseline;
    std::vector<SizeEntry> entries;
};

/// Throws ConfigError when `baseline_label` is absent or its size is not positive.
SizeReport size_report(std::span<const std::pair<std::string, double>> entries, const std::string& baseline_label);

/// Plain-text table: label, input size (MB), input size difference (%).
std::string format_size_report(const SizeReport& report);

/// Decimal megabytes (1 MB = 10^6 bytes).
double to_megabytes(std::uint64_t bytes);

/// Feature bytes each pipeline variant feeds the scorer, as (label, MB)
/// entries: "LMVS" (one float32 embedding per second), "LMVS_unf" (two per
/// second), "No Input" (one all-ones vector per second) and "All captions"
/// (every caption embedding).
std::vector<std::pair<std::string, double>> dataset_input_sizes(std::span<const datamodel::CaptionedVideo> videos);

}  // namespace lmvs::evaluator
