#include <gtest/gtest.h>

#include "properties.hpp"

namespace {

using namespace solcheck;
using namespace solcheck::testing;

TEST(Properties, PrefilterNeverChangesFindings) {
    const auto pool = fixture_line_pool();
    Rng rng(1001);
    std::size_t total_findings = 0;
    for (int n = 0; n < 1000; ++n) {
        const auto fs = format_source(make_source("perm.sol", permuted_source(rng, pool)));
        ASSERT_EQ(prefilter_violation(fs), "");
        total_findings += run_all(catalog(), fs).total();
    }
    EXPECT_GT(total_findings, 1000u);
}

TEST(Properties, FormatterOnFixtures) {
    for (const auto& p : all_fixtures()) EXPECT_EQ(formatter_violation(read_text(p), true), "") << p;
}

TEST(Properties, FormatterFuzz) {
    Rng rng(424242);
    for (int n = 0; n < 10000; ++n) {
        const bool balanced = n % 2 == 0;
        ASSERT_EQ(formatter_violation(random_soup(rng, balanced), balanced), "");
    }
}

TEST(Properties, UnterminatedCommentIsReported) {
    Rng rng(99);
    for (int n = 0; n < 500; ++n) {
        EXPECT_THROW(format_source(make_source("x.sol", random_soup(rng, true) + "/* tail")), UnterminatedBlockComment);
    }
}

TEST(Properties, InstrumentationRoundTripOnFixtures) {
    for (const auto& p : all_fixtures()) EXPECT_EQ(round_trip_violation(format_source(read_source(p))), "") << p;
}

TEST(Properties, InstrumentationRoundTripOnPermutations) {
    const auto pool = fixture_line_pool();
    Rng rng(8080);
    for (int n = 0; n < 300; ++n) {
        ASSERT_EQ(round_trip_violation(format_source(make_source("perm.sol", permuted_source(rng, pool)))), "");
    }
}

}  // namespace
