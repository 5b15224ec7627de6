#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "lmvs/condenser/condensed_sequence.hpp"

namespace lmvs::condenser {

/// Caption embeddings of one time window, one row per caption.
struct EmbeddingMatrix {
    Eigen::MatrixXd rows;
    std::vector<SourceIndex> source_indices;

    Eigen::Index size() const { return rows.rows(); }
    Eigen::Index dim() const { return rows.cols(); }
};

/// Builds a window from raw rows; throws ValidationError when empty, ragged,
/// or containing NaN/Inf.
EmbeddingMatrix make_window(std::span<const std::vector<double>> rows);

/// Pairwise cosine similarities, symmetric with unit diagonal.
struct SimilarityMatrix {
    Eigen::MatrixXd values;
};

/// Throws NumericError naming the first zero-norm row.
SimilarityMatrix cosine_similarity_matrix(const EmbeddingMatrix& window);

/// Row with the largest row sum; ties resolve to the lowest index.
Eigen::Index select_by_similarity(const SimilarityMatrix& matrix);

}  // namespace lmvs::condenser
