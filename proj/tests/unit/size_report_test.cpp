#include "lmvs/evaluator/size_report.hpp"

#include <gtest/gtest.h>

#include <cstdio>

#include "fixtures.hpp"
#include "lmvs/error.hpp"

namespace {

using namespace lmvs::evaluator;

std::string two_decimals(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", x);
    return buf;
}

struct Row {
    double mb, base;
    const char* expected;
};

TEST(SizeReport, PublishedDifferencesToTwoDecimals) {
    const Row rows[] = {{12.28, 30.05, "-59.13"},
                        {38.73, 96.30, "-59.78"},
                        {24.54, 30.05, "-18.34"},
                        {77.37, 96.30, "-19.66"},
                        {16.36, 30.05, "-45.56"}};
    for (const auto& r : rows) {
        const std::vector<std::pair<std::string, double>> entries = {{"base", r.base}, {"x", r.mb}};
        const auto report = size_report(entries, "base");
        EXPECT_EQ(two_decimals(report.entries[1].difference_percent), r.expected);
        EXPECT_EQ(report.entries[0].difference_percent, 0.0);
    }
}

TEST(SizeReport, TableFormat) {
    const std::vector<std::pair<std::string, double>> entries = {{"All", 30.05}, {"LMVS", 12.28}};
    const auto text = format_size_report(size_report(entries, "All"));
    EXPECT_NE(text.find("LMVS"), std::string::npos);
    EXPECT_NE(text.find("12.28"), std::string::npos);
    EXPECT_NE(text.find("-59.13"), std::string::npos);
    EXPECT_NE(text.find("# baseline: All"), std::string::npos);
}

TEST(SizeReport, UnknownOrZeroBaseline) {
    const std::vector<std::pair<std::string, double>> entries = {{"a", 0.0}, {"b", 1.0}};
    EXPECT_THROW(size_report(entries, "c"), lmvs::ConfigError);
    EXPECT_THROW(size_report(entries, "a"), lmvs::ConfigError);
}

TEST(SizeReport, DatasetInputSizes) {
    const std::vector<lmvs::datamodel::CaptionedVideo> videos = {lmvs::testing::small_video(1),
                                                                 lmvs::testing::small_video(2)};
    const auto sizes = dataset_input_sizes(videos);
    ASSERT_EQ(sizes.size(), 4U);
    EXPECT_DOUBLE_EQ(sizes[0].second, 2 * 10 * 8 * 4 / 1e6);
    EXPECT_DOUBLE_EQ(sizes[1].second, 2 * sizes[0].second);
    EXPECT_DOUBLE_EQ(sizes[2].second, sizes[0].second);
    EXPECT_DOUBLE_EQ(sizes[3].second, 2 * 180 * 8 * 4 / 1e6);  // 60 frames x 3 captions per video
    EXPECT_EQ(to_megabytes(2500000), 2.5);
}

}  // namespace
