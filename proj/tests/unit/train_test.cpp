#include "lmvs/scorer/train.hpp"

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gradcheck.hpp"
#include "lmvs/error.hpp"

namespace {

using namespace lmvs::scorer;

ModelConfig small_model() {
    ModelConfig c;
    c.d_model = 8;
    c.n_heads = 2;
    c.d_ff = 16;
    c.n_layers = 1;
    c.seed = 1;
    return c;
}

/// Targets that are a fixed function of the inputs, so they are learnable.
std::vector<Example> learnable(lmvs::Rng& rng, int count) {
    auto data = lmvs::testing::random_batch(rng, count, 10, 8);
    for (auto& ex : data) {
        for (Eigen::Index i = 0; i < ex.inputs.rows(); ++i) ex.targets(i) = ex.inputs(i, 0) > 0 ? 0.9 : 0.1;
    }
    return data;
}

TEST(Train, LossDecreasesOnLearnableData) {
    lmvs::Rng rng(1);
    const auto data = learnable(rng, 8);
    TrainConfig cfg;
    cfg.learning_rate = 3e-3;
    cfg.epochs = 40;
    cfg.seed = 2;
    const double before = dataset_loss(init_model(small_model()), data);
    const auto result = train(init_model(small_model()), data, cfg);
    ASSERT_EQ(result.history.size(), 40U);
    EXPECT_EQ(result.history.front().epoch, 1);
    EXPECT_LT(result.history.back().train_loss, 0.5 * before);
    EXPECT_DOUBLE_EQ(result.history.back().train_loss, dataset_loss(result.model, data));
}

TEST(Train, DeterministicInSeed) {
    lmvs::Rng rng(3);
    const auto data = learnable(rng, 5);
    TrainConfig cfg;
    cfg.epochs = 5;
    cfg.seed = 9;
    const auto a = train(init_model(small_model()), data, cfg);
    const auto b = train(init_model(small_model()), data, cfg);
    EXPECT_EQ(a.model.params.head_w, b.model.params.head_w);
    cfg.seed = 10;
    const auto c = train(init_model(small_model()), data, cfg);
    EXPECT_NE(a.model.params.head_w, c.model.params.head_w);
}

TEST(Train, SgdAndClippingAlsoLearn) {
    lmvs::Rng rng(4);
    const auto data = learnable(rng, 6);
    TrainConfig cfg;
    cfg.optimizer = Optimizer::sgd;
    cfg.learning_rate = 0.05;
    cfg.epochs = 30;
    cfg.grad_clip = 1.0;
    const double before = dataset_loss(init_model(small_model()), data);
    EXPECT_LT(train(init_model(small_model()), data, cfg).history.back().train_loss, before);
}

TEST(Train, RejectsBadConfigAndEmptyData) {
    TrainConfig cfg;
    cfg.learning_rate = 0.0;
    EXPECT_THROW(cfg.validate(), lmvs::ConfigError);
    cfg = {};
    cfg.batch_size = 0;
    EXPECT_THROW(cfg.validate(), lmvs::ConfigError);
    EXPECT_THROW(train(init_model(small_model()), {}, TrainConfig{}), lmvs::ValidationError);
}

TEST(Train, DivergenceIsNumericError) {
    lmvs::Rng rng(5);
    const auto data = learnable(rng, 4);
    TrainConfig cfg;
    cfg.optimizer = Optimizer::sgd;
    cfg.learning_rate = 1e200;
    cfg.epochs = 3;
    EXPECT_THROW(train(init_model(small_model()), data, cfg), lmvs::NumericError);
}

TEST(Train, LossHistoryCsv) {
    const std::vector<EpochLoss> h = {{1, 0.5}, {2, 0.25}};
    EXPECT_EQ(format_loss_history(h), "epoch,train_loss\n1,0.5\n2,0.25\n");
}

}  // namespace
