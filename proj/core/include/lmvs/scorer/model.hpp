#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "lmvs/rng.hpp"

namespace lmvs::scorer {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class PositionalEncoding { sinusoidal, none };

std::string_view to_string(PositionalEncoding pe);
std::optional<PositionalEncoding> parse_positional_encoding(std::string_view name);

struct ModelConfig {
    int d_model = 16;
    int n_layers = 2;
    int n_heads = 4;
    int d_ff = 64;
    int max_seq_len = 768;
    double dropout = 0.1;
    PositionalEncoding positional_encoding = PositionalEncoding::sinusoidal;
    std::uint64_t seed = 0;

    /// Throws ConfigError on an invalid combination.
    void validate() const;

    bool operator==(const ModelConfig&) const = default;
};

/// Parameters of one post-norm encoder layer. Biases and layer-norm vectors
/// are stored as 1 x n matrices so every tensor can be visited uniformly.
struct EncoderLayerParams {
    Matrix wq, bq, wk, bk, wv, bv, wo, bo;
    Matrix ln1_gamma, ln1_beta;
    Matrix w1, b1, w2, b2;
    Matrix ln2_gamma, ln2_beta;
};

struct Parameters {
    std::vector<EncoderLayerParams> layers;
    Matrix head_w;  // d_model x 1
    Matrix head_b;  // 1 x 1

    /// Calls `fn(name, tensor)` for every tensor in a fixed order.
    template <typename Fn>
    void for_each(Fn&& fn) {
        visit(*this, fn);
    }
    template <typename Fn>
    void for_each(Fn&& fn) const {
        visit(*this, fn);
    }

    /// Same shapes, all zeros.
    Parameters zeros_like() const;
    std::size_t count() const;

private:
    template <typename Self, typename Fn>
    static void visit(Self& self, Fn& fn) {
        for (std::size_t l = 0; l < self.layers.size(); ++l) {
            auto& p = self.layers[l];
            const std::string prefix = "layers." + std::to_string(l) + ".";
            fn(prefix + "attn.wq", p.wq);
            fn(prefix + "attn.bq", p.bq);
            fn(prefix + "attn.wk", p.wk);
            fn(prefix + "attn.bk", p.bk);
            fn(prefix + "attn.wv", p.wv);
            fn(prefix + "attn.bv", p.bv);
            fn(prefix + "attn.wo", p.wo);
            fn(prefix + "attn.bo", p.bo);
            fn(prefix + "ln1.gamma", p.ln1_gamma);
            fn(prefix + "ln1.beta", p.ln1_beta);
            fn(prefix + "ffn.w1", p.w1);
            fn(prefix + "ffn.b1", p.b1);
            fn(prefix + "ffn.w2", p.w2);
            fn(prefix + "ffn.b2", p.b2);
            fn(prefix + "ln2.gamma", p.ln2_gamma);
            fn(prefix + "ln2.beta", p.ln2_beta);
        }
        fn(std::string("head.w"), self.head_w);
        fn(std::string("head.b"), self.head_b);
    }
};

/// Stacked self-attention encoder followed by a linear scalar head.
struct ScoringModel {
    ModelConfig config;
    Parameters params;
};

/// Xavier-uniform weights, zero biases, unit layer-norm gains. Deterministic
/// in `config.seed`.
ScoringModel init_model(const ModelConfig& config);

/// One regression sample: a sequence of d_model-vectors (rows) and one target
/// per position.
struct Example {
    Matrix inputs;
    Vector targets;
};

/// Dropout is applied only when `dropout_rng` is non-null and the configured
/// rate is positive; otherwise the call is a pure function of its inputs.
/// Throws ValidationError on over-long sequences or a dimension mismatch.
Vector forward(const ScoringModel& model, const Matrix& sequence, Rng* dropout_rng = nullptr);

/// Mean squared error (1/N) * sum (target - pred)^2.
double loss(std::span<const double> pred, std::span<const double> target);

struct GradientResult {
    double loss = 0.0;
    Parameters grads;
};

/// Exact gradient of the batch-mean loss with respect to every parameter.
GradientResult gradient(const ScoringModel& model, std::span<const Example> batch, Rng* dropout_rng = nullptr);

/// Mean per-sequence loss in evaluation mode.
double dataset_loss(const ScoringModel& model, std::span<const Example> dataset);

}  // namespace lmvs::scorer
