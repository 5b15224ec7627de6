#include "lmvs/scorer/model.hpp"

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gradcheck.hpp"
#include "lmvs/error.hpp"
#include "oracles.hpp"

namespace {

using namespace lmvs::scorer;

ModelConfig config(PositionalEncoding pe = PositionalEncoding::sinusoidal) {
    ModelConfig c;
    c.d_model = 16;
    c.n_layers = 2;
    c.n_heads = 4;
    c.d_ff = 64;
    c.dropout = 0.1;
    c.positional_encoding = pe;
    c.seed = 5;
    return c;
}

std::size_t closed_form_count(int d, int dff, int layers) {
    const auto du = static_cast<std::size_t>(d);
    const auto fu = static_cast<std::size_t>(dff);
    const std::size_t per_layer = 4 * (du * du + du) + 2 * du + du * fu + fu + fu * du + du + 2 * du;
    return static_cast<std::size_t>(layers) * per_layer + du + 1;
}

TEST(Model, ParameterCountMatchesClosedForm) {
    EXPECT_EQ(init_model(config()).params.count(), 6577U);
    EXPECT_EQ(init_model(config()).params.count(), closed_form_count(16, 64, 2));
    auto c = config();
    c.d_model = 8;
    c.n_heads = 2;
    c.d_ff = 24;
    c.n_layers = 3;
    EXPECT_EQ(init_model(c).params.count(), closed_form_count(8, 24, 3));
}

TEST(Model, InitializationIsDeterministicInSeed) {
    const auto a = init_model(config());
    const auto b = init_model(config());
    auto c_cfg = config();
    c_cfg.seed = 6;
    const auto c = init_model(c_cfg);
    EXPECT_EQ(a.params.layers[0].wq, b.params.layers[0].wq);
    EXPECT_NE(a.params.layers[0].wq, c.params.layers[0].wq);
    EXPECT_TRUE(a.params.layers[1].bq.isZero());
    EXPECT_TRUE((a.params.layers[1].ln1_gamma.array() == 1.0).all());
}

TEST(Model, XavierBoundHolds) {
    const auto m = init_model(config());
    const double bound = std::sqrt(6.0 / (16 + 64));
    EXPECT_LE(m.params.layers[0].w1.cwiseAbs().maxCoeff(), bound);
}

TEST(Model, ForwardIsPureWithoutDropoutRng) {
    lmvs::Rng rng(1);
    const auto m = init_model(config());
    const auto batch = lmvs::testing::random_batch(rng, 1, 12, 16);
    EXPECT_EQ(forward(m, batch[0].inputs), forward(m, batch[0].inputs));
    EXPECT_EQ(forward(m, batch[0].inputs).size(), 12);
}

TEST(Model, DropoutChangesTrainingForwardOnly) {
    lmvs::Rng data(2);
    const auto m = init_model(config());
    const auto x = lmvs::testing::random_batch(data, 1, 10, 16)[0].inputs;
    lmvs::Rng a(7), b(7);
    EXPECT_EQ(forward(m, x, &a), forward(m, x, &b));
    EXPECT_NE(forward(m, x, &a), forward(m, x));
}

TEST(Model, PermutationEquivariantWithoutPositionalEncoding) {
    lmvs::Rng rng(3);
    const auto m = init_model(config(PositionalEncoding::none));
    const auto x = lmvs::testing::random_batch(rng, 1, 9, 16)[0].inputs;
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(9);
    perm.setIdentity();
    std::vector<int> idx(9);
    for (int i = 0; i < 9; ++i) idx[static_cast<std::size_t>(i)] = i;
    rng.shuffle(idx);
    for (int i = 0; i < 9; ++i) perm.indices()(i) = idx[static_cast<std::size_t>(i)];
    const Vector base = forward(m, x);
    const Vector permuted = forward(m, perm * x);
    EXPECT_TRUE(permuted.isApprox(perm * base, 1e-12));
}

TEST(Model, PositionalEncodingBreaksPermutationSymmetry) {
    const auto m = init_model(config());
    Matrix x = Matrix::Ones(6, 16);
    const Vector out = forward(m, x);
    EXPECT_GT((out.array() - out(0)).abs().maxCoeff(), 1e-9);
}

TEST(Model, RejectsBadShapes) {
    const auto m = init_model(config());
    EXPECT_THROW(forward(m, Matrix::Ones(4, 15)), lmvs::ValidationError);
    auto c = config();
    c.max_seq_len = 5;
    EXPECT_THROW(forward(init_model(c), Matrix::Ones(6, 16)), lmvs::ValidationError);
}

TEST(Model, ConfigValidation) {
    auto c = config();
    c.n_heads = 5;
    EXPECT_THROW(c.validate(), lmvs::ConfigError);
    c = config();
    c.dropout = 1.0;
    EXPECT_THROW(c.validate(), lmvs::ConfigError);
    c = config();
    c.n_layers = 0;
    EXPECT_THROW(c.validate(), lmvs::ConfigError);
}

TEST(Loss, MatchesScalarOracle) {
    lmvs::Rng rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = 1 + rng.below(50);
        std::vector<double> p(n), t(n);
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = rng.normal();
            t[i] = rng.uniform();
        }
        ASSERT_NEAR(loss(p, t), lmvs::testing::mse_oracle(p, t), 1e-12);
    }
    EXPECT_EQ(loss(std::vector<double>{0.5}, std::vector<double>{0.5}), 0.0);
}

TEST(Gradient, MatchesFiniteDifferences) {
    lmvs::Rng rng(5);
    const auto m = init_model(config());
    const auto batch = lmvs::testing::random_batch(rng, 2, 8, 16);
    for (const auto& g : lmvs::testing::check_gradients(m, batch)) {
        EXPECT_TRUE(g.passes(1e-4)) << g.name << " relative error " << g.relative_error();
    }
}

TEST(Gradient, MatchesFiniteDifferencesWithoutPositionalEncoding) {
    lmvs::Rng rng(6);
    auto c = config(PositionalEncoding::none);
    c.n_layers = 1;
    const auto batch = lmvs::testing::random_batch(rng, 1, 5, 16);
    for (const auto& g : lmvs::testing::check_gradients(init_model(c), batch)) {
        EXPECT_TRUE(g.passes(1e-4)) << g.name << " relative error " << g.relative_error();
    }
}

TEST(Gradient, HeadBiasGradientIsMeanResidual) {
    lmvs::Rng rng(7);
    const auto m = init_model(config());
    const auto batch = lmvs::testing::random_batch(rng, 1, 8, 16);
    const Vector pred = forward(m, batch[0].inputs);
    const double expected = (2.0 * (pred - batch[0].targets)).mean();
    const auto g = gradient(m, batch);
    EXPECT_NEAR(g.grads.head_b(0, 0), expected, 1e-12);
    EXPECT_NEAR(g.loss, (pred - batch[0].targets).squaredNorm() / 8.0, 1e-12);
}

TEST(DatasetLoss, IsMeanOfSequenceLosses) {
    lmvs::Rng rng(8);
    const auto m = init_model(config());
    const auto data = lmvs::testing::random_batch(rng, 3, 7, 16);
    double expected = 0.0;
    for (const auto& ex : data) expected += (forward(m, ex.inputs) - ex.targets).squaredNorm() / 7.0;
    EXPECT_NEAR(dataset_loss(m, data), expected / 3.0, 1e-12);
}

}  // namespace
