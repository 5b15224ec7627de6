#include "lmvs/datamodel/interchange.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "json.hpp"
#include "lmvs/condenser/condense.hpp"
#include "lmvs/condenser/similarity.hpp"
#include "lmvs/error.hpp"

namespace {

using lmvs::datamodel::from_interchange;
using lmvs::datamodel::to_interchange;
using nlohmann::json;

TEST(Interchange, RoundTripPreservesEverything) {
    auto v = lmvs::testing::small_video();
    v.condensed["kmeans"] = lmvs::condenser::condense_video(v, lmvs::condenser::CondenseMethod::kmeans, 5);
    const auto back = from_interchange(to_interchange(v));
    EXPECT_EQ(back, v);
    EXPECT_EQ(to_interchange(back), to_interchange(v));
}

TEST(Interchange, SelfSimilarityIsOneAfterRoundTrip) {
    const auto back = from_interchange(to_interchange(lmvs::testing::small_video()));
    const auto window = lmvs::condenser::second_window_matrix(back, 0);
    const auto sim = lmvs::condenser::cosine_similarity_matrix(window);
    for (Eigen::Index i = 0; i < sim.values.rows(); ++i) EXPECT_DOUBLE_EQ(sim.values(i, i), 1.0);
}

TEST(Interchange, NormalizedScoresAreRecomputedOnLoad) {
    auto doc = json::parse(to_interchange(lmvs::testing::small_video()));
    auto& raw = doc["ground_truth"][0]["raw_scores"];
    for (auto& x : raw) x = 2.0;
    raw[0] = 6.0;
    const auto v = from_interchange(doc.dump());
    EXPECT_EQ(v.ground_truth[0].normalized_scores[0], 1.0);
    EXPECT_EQ(v.ground_truth[0].normalized_scores[1], 0.0);
}

TEST(Interchange, DroppedCaptionFailsValidation) {
    auto doc = json::parse(to_interchange(lmvs::testing::small_video()));
    doc["frames"][3]["captions"].erase(0);
    try {
        from_interchange(doc.dump());
        FAIL() << "expected a validation error";
    } catch (const lmvs::ValidationError& e) {
        EXPECT_EQ(e.field_path(), "frames[3].captions");
    }
}

TEST(Interchange, MalformedDocumentsAreParseErrors) {
    EXPECT_THROW(from_interchange("{"), lmvs::ParseError);
    EXPECT_THROW(from_interchange("[]"), lmvs::ParseError);
    auto doc = json::parse(to_interchange(lmvs::testing::small_video()));
    auto wrong_format = doc;
    wrong_format["format"] = "something-else";
    EXPECT_THROW(from_interchange(wrong_format.dump()), lmvs::ParseError);
    auto future = doc;
    future["format_version"] = 99;
    EXPECT_THROW(from_interchange(future.dump()), lmvs::ParseError);
    auto missing = doc;
    missing.erase("shot_boundaries");
    EXPECT_THROW(from_interchange(missing.dump()), lmvs::ParseError);
    auto bad_b64 = doc;
    bad_b64["frames"][0]["captions"][0]["embedding"] = "@@@@";
    EXPECT_THROW(from_interchange(bad_b64.dump()), lmvs::ParseError);
}

TEST(Interchange, WrongEmbeddingDimensionIsValidationError) {
    auto doc = json::parse(to_interchange(lmvs::testing::small_video()));
    doc["embedding_dim"] = 9;
    EXPECT_THROW(from_interchange(doc.dump()), lmvs::ValidationError);
}

TEST(Interchange, SaveAndLoadThroughFile) {
    lmvs::testing::TempDir dir;
    const auto v = lmvs::testing::small_video();
    lmvs::datamodel::save_captioned_video(dir / "v.json", v);
    EXPECT_EQ(lmvs::datamodel::load_captioned_video(dir / "v.json"), v);
    EXPECT_THROW(lmvs::datamodel::load_captioned_video(dir / "missing.json"), lmvs::IoError);
}

}  // namespace
