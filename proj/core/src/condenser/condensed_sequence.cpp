#include "lmvs/condenser/condensed_sequence.hpp"

namespace lmvs::condenser {

std::string_view to_string(CondenseMethod method) {
    switch (method) {
        case CondenseMethod::cosine: return "cosine";
        case CondenseMethod::kmeans: return "kmeans";
        case CondenseMethod::unfiltered: return "unfiltered";
    }
    return "unknown";
}

std::optional<CondenseMethod> parse_condense_method(std::string_view name) {
    if (name == "cosine") return CondenseMethod::cosine;
    if (name == "kmeans") return CondenseMethod::kmeans;
    if (name == "unfiltered") return CondenseMethod::unfiltered;
    return std::nullopt;
}

}  // namespace lmvs::condenser
