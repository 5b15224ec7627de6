#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lmvs/scorer/model.hpp"

namespace lmvs::scorer {

enum class Optimizer { sgd, adam };

std::string_view to_string(Optimizer optimizer);
std::optional<Optimizer> parse_optimizer(std::string_view name);

struct TrainConfig {
    double learning_rate = 1e-4;
    int epochs = 50;
    int batch_size = 4;
    std::optional<double> grad_clip;
    Optimizer optimizer = Optimizer::adam;
    std::uint64_t seed = 0;

    void validate() const;
};

struct EpochLoss {
    int epoch = 0;
    double train_loss = 0.0;
};

struct TrainResult {
    ScoringModel model;
    std::vector<EpochLoss> history;
};

/// Minibatch training on the mean squared score loss. Examples are shuffled
/// every epoch and dropout is active; `train_loss` is the evaluation-mode
/// dataset loss measured after each epoch. Deterministic in `cfg.seed`.
/// Throws NumericError if the loss becomes non-finite.
TrainResult train(ScoringModel model, std::span<const Example> dataset, const TrainConfig& cfg);

/// Loss history as "epoch,train_loss" rows with a header line.
std::string format_loss_history(std::span<const EpochLoss> history);

}  // namespace lmvs::scorer
