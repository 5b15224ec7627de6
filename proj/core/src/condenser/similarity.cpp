#include "lmvs/condenser/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "lmvs/error.hpp"

namespace lmvs::condenser {

EmbeddingMatrix make_window(std::span<const std::vector<double>> rows) {
    if (rows.empty()) throw ValidationError("window", "needs at least one row");
    const auto dim = static_cast<Eigen::Index>(rows.front().size());
    EmbeddingMatrix window;
    window.rows.resize(static_cast<Eigen::Index>(rows.size()), dim);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (static_cast<Eigen::Index>(rows[r].size()) != dim) {
            throw ValidationError("window[" + std::to_string(r) + "]", "row dimension mismatch");
        }
        for (Eigen::Index c = 0; c < dim; ++c) {
            const double x = rows[r][static_cast<std::size_t>(c)];
            if (!std::isfinite(x)) throw ValidationError("window[" + std::to_string(r) + "]", "non-finite entry");
            window.rows(static_cast<Eigen::Index>(r), c) = x;
        }
        window.source_indices.push_back({static_cast<int>(r), 0});
    }
    return window;
}

SimilarityMatrix cosine_similarity_matrix(const EmbeddingMatrix& window) {
    const Eigen::Index m = window.size();
    if (m == 0) throw ValidationError("window", "needs at least one row");
    const Eigen::VectorXd norms = window.rows.rowwise().norm();
    for (Eigen::Index r = 0; r < m; ++r) {
        if (norms(r) == 0.0) {
            throw NumericError("cosine similarity undefined for zero-norm row " + std::to_string(r));
        }
    }
    SimilarityMatrix out;
    out.values.resize(m, m);
    for (Eigen::Index x = 0; x < m; ++x) {
        out.values(x, x) = 1.0;
        for (Eigen::Index y = x + 1; y < m; ++y) {
            const double dot = window.rows.row(x).dot(window.rows.row(y));
            const double cos = std::clamp(dot / (norms(x) * norms(y)), -1.0, 1.0);
            out.values(x, y) = cos;
            out.values(y, x) = cos;
        }
    }
    return out;
}

Eigen::Index select_by_similarity(const SimilarityMatrix& matrix) {
    const Eigen::VectorXd sums = matrix.values.rowwise().sum();
    Eigen::Index best = 0;
    for (Eigen::Index r = 1; r < sums.size(); ++r) {
        if (sums(r) > sums(best)) best = r;
    }
    return best;
}

}  // namespace lmvs::condenser
