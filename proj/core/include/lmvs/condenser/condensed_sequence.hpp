#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lmvs::condenser {

enum class CondenseMethod { cosine, kmeans, unfiltered };

std::string_view to_string(CondenseMethod method);
std::optional<CondenseMethod> parse_condense_method(std::string_view name);

/// Location of a caption inside a video: sampled-frame ordinal and caption slot.
struct SourceIndex {
    int frame = 0;
    int caption = 0;

    bool operator==(const SourceIndex&) const = default;
};

struct CondensedEntry {
    int second_index = 0;
    std::string text;
    std::vector<float> embedding;
    SourceIndex source;

    bool operator==(const CondensedEntry&) const = default;
};

/// One representative caption per second (two for the unfiltered variant),
/// ordered by second.
struct CondensedSequence {
    CondenseMethod method = CondenseMethod::cosine;
    std::uint64_t seed = 0;
    std::vector<CondensedEntry> entries;

    int entries_per_second() const { return method == CondenseMethod::unfiltered ? 2 : 1; }

    bool operator==(const CondensedSequence&) const = default;
};

}  // namespace lmvs::condenser
