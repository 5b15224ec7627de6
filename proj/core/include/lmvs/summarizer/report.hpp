#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lmvs/summarizer/keyshot.hpp"

namespace lmvs::summarizer {

/// Runs of ones as (start, length) pairs.
std::vector<std::pair<std::int64_t, std::int64_t>> run_length_encode(std::span<const std::uint8_t> mask);
std::vector<std::uint8_t> run_length_decode(std::span<const std::pair<std::int64_t, std::int64_t>> runs,
                                            std::int64_t length);

struct SummaryReportOptions {
    /// Include every condensed caption of the selected shots, not just one.
    bool full_captions = false;
    std::map<std::string, std::string> metadata;
};

/// JSON report with the run-length encoded frame mask, the selected shots and
/// the text summary block.
std::string format_summary_report(const SummaryResult& summary, const datamodel::CaptionedVideo& video,
                                  const condenser::CondensedSequence& condensed,
                                  const SummaryReportOptions& options = {});

}  // namespace lmvs::summarizer
