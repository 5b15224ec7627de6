#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "lmvs/scorer/model.hpp"

namespace lmvs::testing {

struct GroupCheck {
    std::string name;
    double analytic_norm = 0.0;
    double numeric_norm = 0.0;
    double diff_norm = 0.0;

    /// Relative error against the larger of the two gradient norms.
    double relative_error() const {
        const double scale = std::max(analytic_norm, numeric_norm);
        return scale > 0.0 ? diff_norm / scale : 0.0;
    }
    /// The key bias has an exactly zero gradient (its shift cancels in the
    /// softmax), so both norms are round-off there and no ratio is meaningful.
    bool vanishes() const { return std::max(analytic_norm, numeric_norm) < 1e-8; }
    bool passes(double tolerance) const { return vanishes() || relative_error() < tolerance; }
};

/// Central differences of the batch loss for every tensor element, compared
/// group by group with the analytic gradient.
inline std::vector<GroupCheck> check_gradients(const scorer::ScoringModel& model,
                                               const std::vector<scorer::Example>& batch, double h = 1e-4) {
    const auto analytic = scorer::gradient(model, batch).grads;
    auto batch_loss = [&](const scorer::ScoringModel& m) {
        double total = 0.0;
        for (const auto& ex : batch) {
            const scorer::Vector pred = scorer::forward(m, ex.inputs);
            total += scorer::loss(std::span<const double>(pred.data(), static_cast<std::size_t>(pred.size())),
                                  std::span<const double>(ex.targets.data(), static_cast<std::size_t>(ex.targets.size())));
        }
        return total / static_cast<double>(batch.size());
    };

    std::vector<scorer::Matrix> analytic_tensors;
    analytic.for_each([&](const std::string&, const scorer::Matrix& g) { analytic_tensors.push_back(g); });

    std::vector<GroupCheck> out;
    auto probe = model;
    std::size_t index = 0;
    probe.params.for_each([&](const std::string& name, scorer::Matrix& tensor) {
        const auto& a = analytic_tensors[index++];
        scorer::Matrix numeric(tensor.rows(), tensor.cols());
        for (Eigen::Index i = 0; i < tensor.size(); ++i) {
            const double saved = tensor.data()[i];
            tensor.data()[i] = saved + h;
            const double up = batch_loss(probe);
            tensor.data()[i] = saved - h;
            const double down = batch_loss(probe);
            tensor.data()[i] = saved;
            numeric.data()[i] = (up - down) / (2.0 * h);
        }
        out.push_back({name, a.norm(), numeric.norm(), (a - numeric).norm()});
    });
    return out;
}

/// Random regression batch with targets in [0, 1].
inline std::vector<scorer::Example> random_batch(Rng& rng, int count, int length, int dim) {
    std::vector<scorer::Example> batch;
    for (int b = 0; b < count; ++b) {
        scorer::Example ex;
        ex.inputs.resize(length, dim);
        for (Eigen::Index i = 0; i < ex.inputs.size(); ++i) ex.inputs.data()[i] = rng.normal();
        ex.targets.resize(length);
        for (Eigen::Index i = 0; i < length; ++i) ex.targets(i) = rng.uniform();
        batch.push_back(std::move(ex));
    }
    return batch;
}

}  // namespace lmvs::testing
