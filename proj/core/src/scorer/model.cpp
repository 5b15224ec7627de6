#include "lmvs/scorer/model.hpp"

#include <cmath>
#include <numbers>

#include "lmvs/error.hpp"

namespace lmvs::scorer {
namespace {

constexpr double kLayerNormEps = 1e-5;

Matrix xavier(Rng& rng, int fan_in, int fan_out) {
    const double a = std::sqrt(6.0 / (fan_in + fan_out));
    Matrix m(fan_in, fan_out);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.uniform(-a, a);
    }
    return m;
}

Matrix add_row(const Matrix& x, const Matrix& bias) { return x.rowwise() + bias.row(0); }

Matrix column_sums(const Matrix& x) { return x.colwise().sum(); }

Matrix positional_table(int length, int d_model) {
    Matrix pe(length, d_model);
    for (int pos = 0; pos < length; ++pos) {
        for (int i = 0; i < d_model; ++i) {
            const double rate = std::pow(10000.0, static_cast<double>(2 * (i / 2)) / d_model);
            pe(pos, i) = (i % 2 == 0) ? std::sin(pos / rate) : std::cos(pos / rate);
        }
    }
    return pe;
}

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::numbers::sqrt2)); }

double gelu_grad(double x) {
    const double cdf = 0.5 * (1.0 + std::erf(x / std::numbers::sqrt2));
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    return cdf + x * pdf;
}

struct LayerNormCache {
    Matrix xhat;
    Vector rstd;
};

Matrix layer_norm(const Matrix& x, const Matrix& gamma, const Matrix& beta, LayerNormCache& cache) {
    const Eigen::Index d = x.cols();
    cache.xhat.resize(x.rows(), d);
    cache.rstd.resize(x.rows());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        const double mean = x.row(r).mean();
        const double var = (x.row(r).array() - mean).square().sum() / static_cast<double>(d);
        const double rstd = 1.0 / std::sqrt(var + kLayerNormEps);
        cache.rstd(r) = rstd;
        cache.xhat.row(r) = (x.row(r).array() - mean) * rstd;
    }
    Matrix y = cache.xhat.array().rowwise() * gamma.row(0).array();
    return add_row(y, beta);
}

Matrix layer_norm_backward(const Matrix& dy, const Matrix& gamma, const LayerNormCache& cache, Matrix& dgamma,
                           Matrix& dbeta) {
    dgamma += (dy.array() * cache.xhat.array()).colwise().sum().matrix();
    dbeta += column_sums(dy);
    const Matrix dxhat = dy.array().rowwise() * gamma.row(0).array();
    Matrix dx(dy.rows(), dy.cols());
    for (Eigen::Index r = 0; r < dy.rows(); ++r) {
        const double mean_dxhat = dxhat.row(r).mean();
        const double mean_dxhat_xhat = (dxhat.row(r).array() * cache.xhat.row(r).array()).mean();
        dx.row(r) = cache.rstd(r) *
                    (dxhat.row(r).array() - mean_dxhat - cache.xhat.row(r).array() * mean_dxhat_xhat);
    }
    return dx;
}

Matrix dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate, Rng* rng) {
    Matrix mask = Matrix::Ones(rows, cols);
    if (rng == nullptr || rate <= 0.0) return mask;
    const double keep_scale = 1.0 / (1.0 - rate);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) mask(i, j) = rng->uniform() < rate ? 0.0 : keep_scale;
    }
    return mask;
}

struct LayerCache {
    Matrix input;
    Matrix q, k, v;
    std::vector<Matrix> attn;  // per head, L x L
    Matrix concat;
    Matrix drop1;
    LayerNormCache ln1;
    Matrix y1;
    Matrix pre_act;
    Matrix act;
    Matrix drop2;
    LayerNormCache ln2;
};

struct ForwardCache {
    std::vector<LayerCache> layers;
    Matrix output;
    Vector scores;
};

void check_sequence(const ModelConfig& config, const Matrix& sequence) {
    if (sequence.rows() < 1) throw ValidationError("sequence", "must hold at least one position");
    if (sequence.rows() > config.max_seq_len) {
        throw ValidationError("sequence", "length " + std::to_string(sequence.rows()) +
                                              " exceeds max_seq_len " + std::to_string(config.max_seq_len));
    }
    if (sequence.cols() != config.d_model) {
        throw ValidationError("sequence", "vector dimension " + std::to_string(sequence.cols()) +
                                              " != d_model " + std::to_string(config.d_model));
    }
}

ForwardCache run_forward(const ScoringModel& model, const Matrix& sequence, Rng* rng) {
    const auto& cfg = model.config;
    check_sequence(cfg, sequence);
    const Eigen::Index len = sequence.rows();
    const int dh = cfg.d_model / cfg.n_heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

    ForwardCache cache;
    Matrix h = sequence;
    if (cfg.positional_encoding == PositionalEncoding::sinusoidal) {
        h += positional_table(static_cast<int>(len), cfg.d_model);
    }
    cache.layers.resize(model.params.layers.size());
    for (std::size_t l = 0; l < model.params.layers.size(); ++l) {
        const auto& p = model.params.layers[l];
        auto& c = cache.layers[l];
        c.input = h;
        c.q = add_row(h * p.wq, p.bq);
        c.k = add_row(h * p.wk, p.bk);
        c.v = add_row(h * p.wv, p.bv);
        c.concat.resize(len, cfg.d_model);
        c.attn.resize(static_cast<std::size_t>(cfg.n_heads));
        for (int head = 0; head < cfg.n_heads; ++head) {
            const auto cols = Eigen::seqN(head * dh, dh);
            Matrix scores = c.q(Eigen::all, cols) * c.k(Eigen::all, cols).transpose() * scale;
            for (Eigen::Index r = 0; r < len; ++r) {
                const double max = scores.row(r).maxCoeff();
                scores.row(r) = (scores.row(r).array() - max).exp();
                scores.row(r) /= scores.row(r).sum();
            }
            c.concat(Eigen::all, cols) = scores * c.v(Eigen::all, cols);
            c.attn[static_cast<std::size_t>(head)] = std::move(scores);
        }
        c.drop1 = dropout_mask(len, cfg.d_model, cfg.dropout, rng);
        const Matrix attn_out = add_row(c.concat * p.wo, p.bo).cwiseProduct(c.drop1);
        c.y1 = layer_norm(h + attn_out, p.ln1_gamma, p.ln1_beta, c.ln1);

        c.pre_act = add_row(c.y1 * p.w1, p.b1);
        c.act = c.pre_act.unaryExpr(&gelu);
        c.drop2 = dropout_mask(len, cfg.d_model, cfg.dropout, rng);
        const Matrix ffn_out = add_row(c.act * p.w2, p.b2).cwiseProduct(c.drop2);
        h = layer_norm(c.y1 + ffn_out, p.ln2_gamma, p.ln2_beta, c.ln2);
    }
    cache.output = h;
    cache.scores = (h * model.params.head_w).col(0).array() + model.params.head_b(0, 0);
    return cache;
}

void run_backward(const ScoringModel& model, const ForwardCache& cache, const Vector& dscores, Parameters& grads) {
    const auto& cfg = model.config;
    const int dh = cfg.d_model / cfg.n_heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

    grads.head_w += cache.output.transpose() * dscores;
    grads.head_b(0, 0) += dscores.sum();
    Matrix dh_out = dscores * model.params.head_w.transpose();

    for (std::size_t l = model.params.layers.size(); l-- > 0;) {
        const auto& p = model.params.layers[l];
        const auto& c = cache.layers[l];
        auto& g = grads.layers[l];

        // Feed-forward block.
        const Matrix dr2 = layer_norm_backward(dh_out, p.ln2_gamma, c.ln2, g.ln2_gamma, g.ln2_beta);
        const Matrix dffn = dr2.cwiseProduct(c.drop2);
        g.w2 += c.act.transpose() * dffn;
        g.b2 += column_sums(dffn);
        const Matrix dpre = (dffn * p.w2.transpose()).cwiseProduct(c.pre_act.unaryExpr(&gelu_grad));
        g.w1 += c.y1.transpose() * dpre;
        g.b1 += column_sums(dpre);
        const Matrix dy1 = dr2 + dpre * p.w1.transpose();

        // Attention block.
        const Matrix dr1 = layer_norm_backward(dy1, p.ln1_gamma, c.ln1, g.ln1_gamma, g.ln1_beta);
        const Matrix dattn = dr1.cwiseProduct(c.drop1);
        g.wo += c.concat.transpose() * dattn;
        g.bo += column_sums(dattn);
        const Matrix dconcat = dattn * p.wo.transpose();

        Matrix dq(c.q.rows(), c.q.cols());
        Matrix dk(c.k.rows(), c.k.cols());
        Matrix dv(c.v.rows(), c.v.cols());
        for (int head = 0; head < cfg.n_heads; ++head) {
            const auto cols = Eigen::seqN(head * dh, dh);
            const Matrix& a = c.attn[static_cast<std::size_t>(head)];
            const Matrix dout = dconcat(Eigen::all, cols);
            dv(Eigen::all, cols) = a.transpose() * dout;
            const Matrix da = dout * c.v(Eigen::all, cols).transpose();
            const Vector row_dot = (da.array() * a.array()).rowwise().sum();
            const Matrix ds = a.array() * (da.colwise() - row_dot).array();
            dq(Eigen::all, cols) = ds * c.k(Eigen::all, cols) * scale;
            dk(Eigen::all, cols) = ds.transpose() * c.q(Eigen::all, cols) * scale;
        }
        g.wq += c.input.transpose() * dq;
        g.bq += column_sums(dq);
        g.wk += c.input.transpose() * dk;
        g.bk += column_sums(dk);
        g.wv += c.input.transpose() * dv;
        g.bv += column_sums(dv);
        dh_out = dr1 + dq * p.wq.transpose() + dk * p.wk.transpose() + dv * p.wv.transpose();
    }
}

}  // namespace

std::string_view to_string(PositionalEncoding pe) {
    return pe == PositionalEncoding::sinusoidal ? "sinusoidal" : "none";
}

std::optional<PositionalEncoding> parse_positional_encoding(std::string_view name) {
    if (name == "sinusoidal") return PositionalEncoding::sinusoidal;
    if (name == "none") return PositionalEncoding::none;
    return std::nullopt;
}

void ModelConfig::validate() const {
    if (d_model < 1) throw ConfigError("d_model must be >= 1");
    if (n_layers < 1) throw ConfigError("n_layers must be >= 1");
    if (n_heads < 1) throw ConfigError("n_heads must be >= 1");
    if (d_model % n_heads != 0) {
        throw ConfigError("d_model " + std::to_string(d_model) + " is not divisible by n_heads " +
                          std::to_string(n_heads));
    }
    if (d_ff < 1) throw ConfigError("d_ff must be >= 1");
    if (max_seq_len < 1) throw ConfigError("max_seq_len must be >= 1");
    if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must lie in [0, 1)");
}

Parameters Parameters::zeros_like() const {
    Parameters out = *this;
    out.for_each([](const std::string&, Matrix& m) { m.setZero(); });
    return out;
}

std::size_t Parameters::count() const {
    std::size_t n = 0;
    for_each([&](const std::string&, const Matrix& m) { n += static_cast<std::size_t>(m.size()); });
    return n;
}

ScoringModel init_model(const ModelConfig& config) {
    config.validate();
    Rng rng(config.seed);
    const int d = config.d_model;
    const int f = config.d_ff;
    ScoringModel model;
    model.config = config;
    model.params.layers.resize(static_cast<std::size_t>(config.n_layers));
    for (auto& p : model.params.layers) {
        p.wq = xavier(rng, d, d);
        p.bq = Matrix::Zero(1, d);
        p.wk = xavier(rng, d, d);
        p.bk = Matrix::Zero(1, d);
        p.wv = xavier(rng, d, d);
        p.bv = Matrix::Zero(1, d);
        p.wo = xavier(rng, d, d);
        p.bo = Matrix::Zero(1, d);
        p.ln1_gamma = Matrix::Ones(1, d);
        p.ln1_beta = Matrix::Zero(1, d);
        p.w1 = xavier(rng, d, f);
        p.b1 = Matrix::Zero(1, f);
        p.w2 = xavier(rng, f, d);
        p.b2 = Matrix::Zero(1, d);
        p.ln2_gamma = Matrix::Ones(1, d);
        p.ln2_beta = Matrix::Zero(1, d);
    }
    model.params.head_w = xavier(rng, d, 1);
    model.params.head_b = Matrix::Zero(1, 1);
    return model;
}

Vector forward(const ScoringModel& model, const Matrix& sequence, Rng* dropout_rng) {
    return run_forward(model, sequence, dropout_rng).scores;
}

double loss(std::span<const double> pred, std::span<const double> target) {
    if (pred.size() != target.size()) {
        throw ValidationError("loss", "prediction length " + std::to_string(pred.size()) +
                                          " != target length " + std::to_string(target.size()));
    }
    if (pred.empty()) throw ValidationError("loss", "needs at least one position");
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double diff = target[i] - pred[i];
        sum += diff * diff;
    }
    return sum / static_cast<double>(pred.size());
}

GradientResult gradient(const ScoringModel& model, std::span<const Example> batch, Rng* dropout_rng) {
    if (batch.empty()) throw ValidationError("batch", "must hold at least one example");
    GradientResult result;
    result.grads = model.params.zeros_like();
    const double batch_scale = 1.0 / static_cast<double>(batch.size());
    for (const auto& example : batch) {
        const auto cache = run_forward(model, example.inputs, dropout_rng);
        if (cache.scores.size() != example.targets.size()) {
            throw ValidationError("targets", "one target per sequence position required");
        }
        const auto n = static_cast<double>(cache.scores.size());
        result.loss += batch_scale * loss(std::span(cache.scores.data(), cache.scores.size()),
                                          std::span(example.targets.data(), example.targets.size()));
        const Vector dscores = (2.0 * batch_scale / n) * (cache.scores - example.targets);
        run_backward(model, cache, dscores, result.grads);
    }
    return result;
}

double dataset_loss(const ScoringModel& model, std::span<const Example> dataset) {
    if (dataset.empty()) throw ValidationError("dataset", "must hold at least one example");
    double total = 0.0;
    for (const auto& example : dataset) {
        const Vector scores = forward(model, example.inputs);
        total += loss(std::span(scores.data(), scores.size()),
                      std::span(example.targets.data(), example.targets.size()));
    }
    return total / static_cast<double>(dataset.size());
}

}  // namespace lmvs::scorer
