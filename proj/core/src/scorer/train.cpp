#include "lmvs/scorer/train.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

#include "lmvs/error.hpp"

namespace lmvs::scorer {
namespace {

struct AdamState {
    Parameters m;
    Parameters v;
    long step = 0;
};

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

double global_norm(const Parameters& grads) {
    double sum = 0.0;
    grads.for_each([&](const std::string&, const Matrix& g) { sum += g.squaredNorm(); });
    return std::sqrt(sum);
}

std::vector<Matrix*> tensors(Parameters& p) {
    std::vector<Matrix*> out;
    p.for_each([&](const std::string&, Matrix& m) { out.push_back(&m); });
    return out;
}

void apply_update(Parameters& params, Parameters& grads, const TrainConfig& cfg, AdamState& adam) {
    if (cfg.grad_clip) {
        const double norm = global_norm(grads);
        if (norm > *cfg.grad_clip) {
            const double scale = *cfg.grad_clip / norm;
            grads.for_each([&](const std::string&, Matrix& g) { g *= scale; });
        }
    }
    auto p = tensors(params);
    auto g = tensors(grads);
    if (cfg.optimizer == Optimizer::sgd) {
        for (std::size_t i = 0; i < p.size(); ++i) *p[i] -= cfg.learning_rate * *g[i];
        return;
    }
    ++adam.step;
    auto m = tensors(adam.m);
    auto v = tensors(adam.v);
    const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(adam.step));
    const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(adam.step));
    for (std::size_t i = 0; i < p.size(); ++i) {
        *m[i] = kBeta1 * *m[i] + (1.0 - kBeta1) * *g[i];
        *v[i] = kBeta2 * *v[i] + (1.0 - kBeta2) * g[i]->cwiseProduct(*g[i]);
        const Matrix step = (*m[i] / c1).array() / ((*v[i] / c2).array().sqrt() + kAdamEps);
        *p[i] -= cfg.learning_rate * step;
    }
}

void append_double(std::string& out, double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    out.append(buf, res.ptr);
}

}  // namespace

std::string_view to_string(Optimizer optimizer) { return optimizer == Optimizer::sgd ? "sgd" : "adam"; }

std::optional<Optimizer> parse_optimizer(std::string_view name) {
    if (name == "sgd") return Optimizer::sgd;
    if (name == "adam") return Optimizer::adam;
    return std::nullopt;
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning_rate must be > 0");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (grad_clip && !(*grad_clip > 0.0)) throw ConfigError("grad_clip must be > 0");
}

TrainResult train(ScoringModel model, std::span<const Example> dataset, const TrainConfig& cfg) {
    cfg.validate();
    if (dataset.empty()) throw ValidationError("dataset", "training needs at least one example");
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (dataset[i].inputs.rows() > model.config.max_seq_len) {
            throw ValidationError("dataset[" + std::to_string(i) + "]", "sequence longer than max_seq_len");
        }
    }

    Rng rng(cfg.seed);
    AdamState adam{model.params.zeros_like(), model.params.zeros_like(), 0};
    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<Example> batch;

    TrainResult result;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            batch.clear();
            for (std::size_t i = start; i < end; ++i) batch.push_back(dataset[order[i]]);
            auto step = gradient(model, batch, &rng);
            if (!std::isfinite(step.loss)) {
                throw NumericError("non-finite training loss at epoch " + std::to_string(epoch) + ", batch " +
                                   std::to_string(start / static_cast<std::size_t>(cfg.batch_size)));
            }
            apply_update(model.params, step.grads, cfg, adam);
        }
        const double epoch_loss = dataset_loss(model, dataset);
        if (!std::isfinite(epoch_loss)) {
            throw NumericError("non-finite training loss after epoch " + std::to_string(epoch));
        }
        result.history.push_back({epoch, epoch_loss});
    }
    result.model = std::move(model);
    return result;
}

std::string format_loss_history(std::span<const EpochLoss> history) {
    std::string out = "epoch,train_loss\n";
    for (const auto& row : history) {
        out += std::to_string(row.epoch);
        out += ',';
        append_double(out, row.train_loss);
        out += '\n';
    }
    return out;
}

}  // namespace lmvs::scorer
