#include <gtest/gtest.h>

#include "solcheck/detectors.hpp"
#include "solcheck/errors.hpp"
#include "solcheck/rule_engine.hpp"
#include "test_support.hpp"

namespace {

using namespace solcheck;
using solcheck::testing::format_text;

RuleSpec toy_rule() {
    RuleSpec r;
    r.id = "toy";
    r.number = 1;
    r.title = "Toy";
    r.description = "toy description";
    r.suggestion = "toy suggestion";
    Pattern hit;
    hit.id = "t.1";
    hit.source = R"(\bdanger\w*)";
    hit.keywords = {"danger"};
    hit.compile(r.id);
    Pattern veto;
    veto.id = "t.2";
    veto.source = R"(\bsafe\b)";
    veto.role = PatternRole::Exclude;
    veto.keywords = {"safe"};
    veto.compile(r.id);
    r.patterns = {hit, veto};
    r.keywords = {"danger"};
    return r;
}

TEST(RuleEngine, KeywordFilter) {
    EXPECT_TRUE(keyword_filter("x.call.value(1)()", {"send", "call"}));
    EXPECT_FALSE(keyword_filter("x.transfer(1);", {"send", "call"}));
    EXPECT_FALSE(keyword_filter("anything", {}));
}

TEST(RuleEngine, PerLineMatchAndExclude) {
    const auto fs = format_text("danger();\ndanger(); danger2();\nsafe danger();\nok();\n");
    const auto found = match_rule(toy_rule(), fs);
    ASSERT_EQ(found.size(), 3u);
    EXPECT_EQ(found[0].formatted_line, 1u);
    EXPECT_EQ(found[1].formatted_line, 2u);
    EXPECT_EQ(found[2].formatted_line, 3u);
    EXPECT_EQ(found[0].original_line, 1u);
    EXPECT_EQ(found[2].original_line, 2u);
    EXPECT_EQ(found[0].message, "toy description");
    EXPECT_EQ(found[0].pattern_id, "t.1");
}

TEST(RuleEngine, BadPatternNamesRuleAndFormula) {
    Pattern p;
    p.id = "9.9";
    p.source = "(unclosed";
    try {
        p.compile("broken");
        FAIL();
    } catch (const PatternCompileError& e) {
        EXPECT_EQ(e.rule_id(), "broken");
        EXPECT_EQ(e.pattern_id(), "9.9");
    }
}

TEST(RuleEngine, CompoundRuleRejectedByMatchRule) {
    const auto fs = format_text("contract C {\n}\n");
    EXPECT_THROW(match_rule(catalog_rule("locked-money"), fs), std::invalid_argument);
}

TEST(RuleEngine, RunAllCountsEveryRule) {
    const auto fs = format_text("");
    int ticks = 0;
    const auto r = run_all(catalog(), fs, {}, [&] { return 10.0 + 0.25 * ticks++; });
    EXPECT_EQ(r.counts.size(), 18u);
    for (const auto& [id, n] : r.counts) EXPECT_EQ(n, 0u) << id;
    EXPECT_EQ(r.total(), 0u);
    EXPECT_DOUBLE_EQ(r.elapsed, 0.25);
}

TEST(RuleEngine, RunAllOrdersByCatalogThenLine) {
    const auto fs = solcheck::testing::load_fixture("detectors/misc.sol");
    const auto r = run_all(catalog(), fs);
    std::size_t total = 0;
    for (const auto& [id, n] : r.counts) total += n;
    EXPECT_EQ(total, r.total());
    auto rank = [](const std::string& id) {
        for (const auto& rule : catalog()) {
            if (rule.id == id) return rule.number;
        }
        return 0;
    };
    for (std::size_t i = 1; i < r.findings.size(); ++i) {
        const auto& a = r.findings[i - 1];
        const auto& b = r.findings[i];
        EXPECT_TRUE(rank(a.rule_id) < rank(b.rule_id) ||
                    (a.rule_id == b.rule_id && a.formatted_line <= b.formatted_line));
    }
}

TEST(RuleEngine, UnbalancedInputFails) {
    EXPECT_THROW(run_all(catalog(), format_text("contract C {\n")), UnbalancedBraces);
}

TEST(RuleEngine, InheritanceIndexMerge) {
    InheritanceIndex a;
    a.bases["X"] = {"Y"};
    a.roots = {"ERC20"};
    InheritanceIndex b;
    b.bases["X"] = {"Y", "Z"};
    b.bases["W"] = {};
    b.roots = {"ERC721"};
    a.merge(b);
    EXPECT_EQ(a.bases["X"], (std::vector<std::string>{"Y", "Z"}));
    EXPECT_TRUE(a.bases.count("W"));
    EXPECT_EQ(a.roots.size(), 2u);
}

}  // namespace
