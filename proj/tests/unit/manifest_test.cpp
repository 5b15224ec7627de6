#include "lmvs/datamodel/manifest.hpp"

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "lmvs/datamodel/interchange.hpp"
#include "lmvs/error.hpp"
#include "lmvs/evaluator/synthetic.hpp"
#include "lmvs/util/atomic_file.hpp"

namespace {

using namespace lmvs::datamodel;

class ManifestTest : public ::testing::Test {
protected:
    void SetUp() override {
        auto spec = lmvs::testing::small_spec();
        spec.n_videos = 3;
        manifest_path_ = lmvs::evaluator::write_synthetic_dataset(dir_.path(), spec);
    }
    lmvs::testing::TempDir dir_;
    std::filesystem::path manifest_path_;
};

TEST_F(ManifestTest, GeneratedDatasetValidatesClean) {
    const auto m = load_manifest(manifest_path_);
    EXPECT_EQ(m.videos.size(), 3U);
    EXPECT_EQ(m.embedding_dim, 8);
    EXPECT_EQ(m.feature_bytes, 3U * 60U * 3U * 8U * 4U);
    EXPECT_TRUE(validate_manifest(m).clean());
}

TEST_F(ManifestTest, FeatureBytesMatchOnDiskPayload) {
    const auto m = load_manifest(manifest_path_);
    std::uint64_t total = 0;
    for (const auto& v : load_dataset(m)) total += embedding_payload_bytes(v);
    EXPECT_EQ(total, m.feature_bytes);
}

TEST_F(ManifestTest, FeatureBytesMismatchIsReported) {
    auto m = load_manifest(manifest_path_);
    m.feature_bytes += 4;
    const auto report = validate_manifest(m);
    ASSERT_EQ(report.entries.size(), 1U);
    EXPECT_NE(report.entries[0].message.find("feature_bytes"), std::string::npos);
}

TEST_F(ManifestTest, BrokenVideoIsNamed) {
    const auto m = load_manifest(manifest_path_);
    auto v = load_captioned_video(m.resolve(m.videos[1]));
    v.frames[0].captions.pop_back();
    lmvs::util::write_file_atomic(m.resolve(m.videos[1]), to_interchange(v));
    const auto report = validate_manifest(m);
    ASSERT_FALSE(report.clean());
    EXPECT_EQ(report.entries[0].video, m.videos[1].generic_string());
}

TEST_F(ManifestTest, DimensionMismatchAcrossVideosIsReported) {
    auto m = load_manifest(manifest_path_);
    m.embedding_dim = 9;
    EXPECT_EQ(validate_manifest(m).entries.size(), 3U);
}

TEST_F(ManifestTest, MissingVideoIsIoError) {
    auto m = load_manifest(manifest_path_);
    m.videos.emplace_back("nope.json");
    EXPECT_THROW(validate_manifest(m), lmvs::IoError);
}

TEST_F(ManifestTest, SaveLoadRoundTrip) {
    const auto m = load_manifest(manifest_path_);
    save_manifest(dir_ / "copy.json", m);
    const auto back = load_manifest(dir_ / "copy.json");
    EXPECT_EQ(back.name, m.name);
    EXPECT_EQ(back.videos, m.videos);
    EXPECT_EQ(back.feature_bytes, m.feature_bytes);
}

TEST_F(ManifestTest, ParallelLoadMatchesSerial) {
    const auto m = load_manifest(manifest_path_);
    EXPECT_EQ(load_dataset(m, 1), load_dataset(m, 3));
}

TEST(Manifest, RejectsNonManifestDocuments) {
    lmvs::testing::TempDir dir;
    lmvs::util::write_file_atomic(dir / "m.json", R"({"format":"other"})");
    EXPECT_THROW(load_manifest(dir / "m.json"), lmvs::ParseError);
    lmvs::util::write_file_atomic(dir / "m.json", "not json");
    EXPECT_THROW(load_manifest(dir / "m.json"), lmvs::ParseError);
}

}  // namespace
