#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "lmvs/condenser/similarity.hpp"

namespace lmvs::condenser {

struct KMeansOptions {
    int k = 2;
    std::uint64_t seed = 0;
    int max_iter = 100;
    double tol = 1e-6;
};

struct KMeansResult {
    /// One centroid per row.
    Eigen::MatrixXd centroids;
    std::vector<int> assignments;
    double inertia = 0.0;
    int iterations_run = 0;
    std::uint64_t seed = 0;
    /// Inertia after every assignment step, in order.
    std::vector<double> inertia_history;

    int cluster_size(int cluster) const;
};

/// Lloyd's algorithm in Euclidean space.
///
/// Initialization takes the pair of rows at maximal pairwise distance (the
/// seed only chooses among exactly tied pairs). For k > 2 further centroids
/// are added farthest-first. An emptied cluster takes the point farthest from
/// its own centroid among clusters with two or more members. Iteration stops
/// when no centroid moves by `tol` or more, or after `max_iter` rounds.
KMeansResult kmeans_partition(const EmbeddingMatrix& window, const KMeansOptions& options = {});

/// Row of the majority cluster nearest to that cluster's centroid.
///
/// Equal cluster sizes resolve to the cluster with the smaller within-cluster
/// sum of squares (then the lower cluster id); equal distances resolve to the
/// lowest row index.
Eigen::Index select_by_centroid(const EmbeddingMatrix& window, const KMeansResult& km);

}  // namespace lmvs::condenser
