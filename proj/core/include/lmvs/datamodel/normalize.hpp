#pragma once

#include <span>
#include <vector>

namespace lmvs::datamodel {

/// Min-max normalization to [0, 1]: (x - min) / (max - min). A constant input
/// maps to all zeros. Throws ValidationError for empty or non-finite input.
std::vector<double> normalize_scores(std::span<const double> raw);

}  // namespace lmvs::datamodel
