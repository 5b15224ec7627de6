#include "lmvs/datamodel/normalize.hpp"

#include <algorithm>
#include <cmath>

#include "lmvs/error.hpp"

namespace lmvs::datamodel {

std::vector<double> normalize_scores(std::span<const double> raw) {
    if (raw.empty()) throw ValidationError("scores", "cannot normalize an empty score list");
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!std::isfinite(raw[i])) {
            throw ValidationError("scores[" + std::to_string(i) + "]", "non-finite score");
        }
    }
    const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    const double min = *lo;
    const double range = *hi - min;
    std::vector<double> out(raw.size(), 0.0);
    if (range == 0.0) return out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        out[i] = (raw[i] - min) / range;
    }
    return out;
}

}  // namespace lmvs::datamodel
