#include "lmvs/condenser/kmeans.hpp"

#include <algorithm>
#include <limits>

#include "lmvs/error.hpp"
#include "lmvs/rng.hpp"

namespace lmvs::condenser {
namespace {

std::vector<Eigen::Index> initial_rows(const Eigen::MatrixXd& x, int k, std::uint64_t seed) {
    const Eigen::Index m = x.rows();
    double best = -1.0;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> tied;
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i + 1; j < m; ++j) {
            const double d = (x.row(i) - x.row(j)).squaredNorm();
            if (d > best) {
                best = d;
                tied.assign(1, {i, j});
            } else if (d == best) {
                tied.emplace_back(i, j);
            }
        }
    }
    auto pick = tied.front();
    if (tied.size() > 1) {
        Rng rng(seed);
        pick = tied[rng.below(tied.size())];
    }
    std::vector<Eigen::Index> chosen{pick.first, pick.second};
    // Farthest-first for any further centroid.
    while (static_cast<int>(chosen.size()) < k) {
        Eigen::Index far = 0;
        double far_d = -1.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            double nearest = std::numeric_limits<double>::infinity();
            for (auto c : chosen) nearest = std::min(nearest, (x.row(i) - x.row(c)).squaredNorm());
            if (nearest > far_d) {
                far_d = nearest;
                far = i;
            }
        }
        chosen.push_back(far);
    }
    return chosen;
}

double assign(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centroids, std::vector<int>& assignments) {
    double inertia = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        int best = 0;
        double best_d = (x.row(i) - centroids.row(0)).squaredNorm();
        for (Eigen::Index c = 1; c < centroids.rows(); ++c) {
            const double d = (x.row(i) - centroids.row(c)).squaredNorm();
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(c);
            }
        }
        assignments[static_cast<std::size_t>(i)] = best;
        inertia += best_d;
    }
    return inertia;
}

void repair_empty(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centroids, std::vector<int>& assignments,
                  int k) {
    for (int c = 0; c < k; ++c) {
        std::vector<int> sizes(static_cast<std::size_t>(k), 0);
        for (int a : assignments) ++sizes[static_cast<std::size_t>(a)];
        if (sizes[static_cast<std::size_t>(c)] > 0) continue;
        Eigen::Index far = -1;
        double far_d = -1.0;
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            const int owner = assignments[static_cast<std::size_t>(i)];
            if (sizes[static_cast<std::size_t>(owner)] < 2) continue;
            const double d = (x.row(i) - centroids.row(owner)).squaredNorm();
            if (d > far_d) {
                far_d = d;
                far = i;
            }
        }
        if (far >= 0) assignments[static_cast<std::size_t>(far)] = c;
    }
}

}  // namespace

int KMeansResult::cluster_size(int cluster) const {
    return static_cast<int>(std::count(assignments.begin(), assignments.end(), cluster));
}

KMeansResult kmeans_partition(const EmbeddingMatrix& window, const KMeansOptions& options) {
    const Eigen::MatrixXd& x = window.rows;
    const int k = options.k;
    if (k < 2) throw ConfigError("k-means needs k >= 2");
    if (x.rows() < k) {
        throw ConfigError("k-means needs at least k = " + std::to_string(k) + " rows, window has " +
                          std::to_string(x.rows()));
    }
    if (options.max_iter < 1) throw ConfigError("k-means max_iter must be >= 1");

    KMeansResult result;
    result.seed = options.seed;
    const auto init = initial_rows(x, k, options.seed);
    result.centroids.resize(k, x.cols());
    for (int c = 0; c < k; ++c) result.centroids.row(c) = x.row(init[static_cast<std::size_t>(c)]);

    result.assignments.assign(static_cast<std::size_t>(x.rows()), 0);
    for (int iter = 1; iter <= options.max_iter; ++iter) {
        result.inertia_history.push_back(assign(x, result.centroids, result.assignments));
        repair_empty(x, result.centroids, result.assignments, k);

        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(k, x.cols());
        std::vector<int> counts(static_cast<std::size_t>(k), 0);
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            const int c = result.assignments[static_cast<std::size_t>(i)];
            next.row(c) += x.row(i);
            ++counts[static_cast<std::size_t>(c)];
        }
        double shift = 0.0;
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] == 0) {
                next.row(c) = result.centroids.row(c);
            } else {
                next.row(c) /= counts[static_cast<std::size_t>(c)];
            }
            shift = std::max(shift, (next.row(c) - result.centroids.row(c)).norm());
        }
        result.centroids = std::move(next);
        result.iterations_run = iter;
        if (shift < options.tol) break;
    }
    assign(x, result.centroids, result.assignments);
    // Duplicate rows can still empty a cluster here; repair and re-measure.
    repair_empty(x, result.centroids, result.assignments, k);
    result.inertia = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        result.inertia += (x.row(i) - result.centroids.row(result.assignments[static_cast<std::size_t>(i)])).squaredNorm();
    }
    result.inertia_history.push_back(result.inertia);
    return result;
}

Eigen::Index select_by_centroid(const EmbeddingMatrix& window, const KMeansResult& km) {
    const Eigen::MatrixXd& x = window.rows;
    const auto k = static_cast<int>(km.centroids.rows());
    if (static_cast<Eigen::Index>(km.assignments.size()) != x.rows()) {
        throw ValidationError("kmeans", "result does not belong to this window");
    }
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    std::vector<double> sse(static_cast<std::size_t>(k), 0.0);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const int c = km.assignments[static_cast<std::size_t>(i)];
        ++sizes[static_cast<std::size_t>(c)];
        sse[static_cast<std::size_t>(c)] += (x.row(i) - km.centroids.row(c)).squaredNorm();
    }
    int major = 0;
    for (int c = 1; c < k; ++c) {
        const auto uc = static_cast<std::size_t>(c);
        const auto um = static_cast<std::size_t>(major);
        if (sizes[uc] > sizes[um] || (sizes[uc] == sizes[um] && sse[uc] < sse[um])) major = c;
    }
    Eigen::Index best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        if (km.assignments[static_cast<std::size_t>(i)] != major) continue;
        const double d = (x.row(i) - km.centroids.row(major)).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

}  // namespace lmvs::condenser
