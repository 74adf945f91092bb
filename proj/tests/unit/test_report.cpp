#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "solcheck/detectors.hpp"
#include "solcheck/errors.hpp"
#include "solcheck/report.hpp"
#include "test_support.hpp"

namespace {

using namespace solcheck;
using solcheck::testing::read_text;

const Clock kZero = [] { return 0.0; };

DetectionResult analyse(const std::string& fixture, const std::string& shown_path) {
    const auto raw = make_source(shown_path, read_text(solcheck::testing::fixture_path(fixture)));
    return run_all(catalog(), format_source(raw), {}, kZero);
}

TEST(Report, ZeroFindings) {
    const auto r = run_all(catalog(), format_source(make_source("empty.sol", "")), {}, kZero);
    const auto rep = make_report(r);
    EXPECT_EQ(rep.total_problem_count, 0u);
    ASSERT_EQ(rep.sections.size(), 18u);
    for (const auto& s : rep.sections) EXPECT_TRUE(s.lines.empty());
    const std::string text = render_text(rep);
    EXPECT_NE(text.find("Total number of problematic statements: 0\n"), std::string::npos);
    std::size_t sections = 0;
    for (std::size_t at = 0; (at = text.find("Details of the problem", at)) != std::string::npos; ++at) ++sections;
    EXPECT_EQ(sections, 18u);
}

TEST(Report, BalanceEqualitySection) {
    const auto rep = make_report(analyse("listings/balance_equality.sol", "balance_equality.sol"));
    const auto& s = rep.sections[0];
    EXPECT_EQ(s.rule_id, "balance-equality");
    ASSERT_EQ(s.lines.size(), 1u);
    EXPECT_EQ(s.lines[0].original_line, 5u);
    EXPECT_NE(render_text(rep).find("Problem code line number: 5\n"), std::string::npos);
}

TEST(Report, TotalEqualsSectionSum) {
    for (const auto& p : solcheck::testing::all_fixtures()) {
        const auto rep = make_report(run_all(catalog(), format_source(read_source(p)), {}, kZero));
        std::size_t sum = 0;
        for (const auto& s : rep.sections) sum += s.lines.size();
        EXPECT_EQ(sum, rep.total_problem_count) << p;
    }
}

TEST(Report, MachineRoundTrip) {
    for (const auto& p : solcheck::testing::all_fixtures()) {
        auto result = run_all(catalog(), format_source(read_source(p)), {}, [] { return 1.5; });
        result.elapsed = 0.123456789;
        const auto rep = make_report(result);
        EXPECT_EQ(parse_machine(render_machine(rep)), rep) << p;
    }
}

TEST(Report, MachineRejectsBadInput) {
    EXPECT_THROW(parse_machine("not json"), ParseError);
    EXPECT_THROW(parse_machine("{}"), ParseError);
    std::string doc = render_machine(make_report(analyse("listings/balance_equality.sol", "b.sol")));
    const auto at = doc.find("\"total\": ");
    ASSERT_NE(at, std::string::npos);
    doc.replace(at, 10, "\"total\": 9");
    EXPECT_THROW(parse_machine(doc), ParseError);
}

TEST(Report, GoldenReentrance) {
    const auto rep = make_report(analyse("instrument/Reentrance.sol", "Reentrance.sol"));
    EXPECT_EQ(render_machine(rep), read_text(solcheck::testing::golden_path("Reentrance.report.json")));
    EXPECT_EQ(render_text(rep), read_text(solcheck::testing::golden_path("Reentrance.report.txt")));
}

TEST(Report, BatchConcatenation) {
    const auto a = make_report(analyse("listings/balance_equality.sol", "a.sol"));
    const auto b = make_report(analyse("listings/tx_origin.sol", "b.sol"));
    const std::string both = render_text(std::vector<DetectionReport>{a, b});
    const std::string sep = std::string(72, '=') + "\n";
    EXPECT_EQ(both, render_text(a) + sep + render_text(b));
    EXPECT_EQ(render_text(std::vector<DetectionReport>{a}), render_text(a));
}

TEST(Metrics, TableEightCaseOne) {
    const Tally t = Tally::from_swapped_labels(37, 0, 1);
    EXPECT_EQ(t.tp, 37u);
    EXPECT_EQ(t.missed, 0u);
    EXPECT_EQ(t.false_alarms, 1u);
    EXPECT_EQ(format_percent(t.recall()), "100.0%");
    EXPECT_EQ(format_percent(t.precision()), "97.4%");
    EXPECT_NEAR(*t.precision(), 37.0 / 38.0, 1e-12);
}

TEST(Metrics, NotApplicableOnlyOnEmptyDenominator) {
    const Tally none = Tally::from_swapped_labels(0, 0, 0);
    EXPECT_EQ(format_percent(none.recall()), "N/A");
    EXPECT_EQ(format_percent(none.precision()), "N/A");
    const Tally missed = Tally::from_swapped_labels(0, 3, 0);
    EXPECT_EQ(format_percent(missed.recall()), "0.0%");
    EXPECT_EQ(format_percent(missed.precision()), "N/A");
}

TEST(Metrics, LinesPerSecond) {
    const auto rps = lines_per_second(1239927, 318.02);
    ASSERT_TRUE(rps);
    EXPECT_NEAR(*rps, 3899.0, 1.0);
    EXPECT_FALSE(lines_per_second(10, 0.0));
    EXPECT_FALSE(lines_per_second(10, -1.0));
}

TEST(Metrics, EmptyCorpusThrows) { EXPECT_THROW(compute_metrics({}, 1.0), EmptyCorpus); }

std::vector<DetectionResult> corpus() {
    std::vector<DetectionResult> out;
    for (const auto& p : solcheck::testing::all_fixtures()) {
        out.push_back(run_all(catalog(), format_source(read_source(p)), {}, kZero));
    }
    return out;
}

TEST(Metrics, PermutationInvariant) {
    auto results = corpus();
    std::vector<Annotation> truth;
    for (const auto& r : results) {
        for (const auto& f : r.findings) {
            if (f.original_line % 2 == 0) truth.push_back({r.path, f.rule_id, f.original_line});
        }
        truth.push_back({r.path, "balance-equality", 1000});
    }
    const auto base = compute_metrics(results, 2.0, &truth);
    solcheck::testing::Rng rng(11);
    for (int n = 0; n < 20; ++n) {
        std::shuffle(results.begin(), results.end(), rng);
        EXPECT_EQ(compute_metrics(results, 2.0, &truth), base);
    }
    for (const auto& [rule, p] : base.proportion) {
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0);
    }
    for (const auto& [rule, t] : base.accuracy) {
        for (auto v : {t.recall(), t.precision()}) {
            if (v) {
                EXPECT_GE(*v, 0.0);
                EXPECT_LE(*v, 1.0);
            }
        }
    }
}

TEST(Metrics, ProportionOneWhenEveryFileTriggers) {
    std::vector<DetectionResult> results;
    for (const char* f : {"listings/pragma_forms.sol", "listings/deduct_first.sol", "detectors/token.sol"}) {
        results.push_back(analyse(f, f));
    }
    const auto m = compute_metrics(results, 1.0);
    EXPECT_DOUBLE_EQ(m.proportion.at("compiler-version"), 1.0);
    EXPECT_DOUBLE_EQ(m.proportion.at("balance-equality"), 0.0);
    EXPECT_FALSE(m.overall);
}

TEST(Metrics, AnnotationsTally) {
    const auto r = analyse("listings/balance_equality.sol", "corpus/balance_equality.sol");
    std::istringstream in(
        "# file rule line\n"
        "\n"
        "balance_equality.sol balance-equality 5\n"
        "balance_equality.sol tx-origin-auth 2   # never reported\n"
        "other.sol balance-equality 5\n");
    const auto truth = parse_annotations(in);
    ASSERT_EQ(truth.size(), 3u);
    const auto m = compute_metrics({r}, 1.0, &truth);
    EXPECT_EQ(m.accuracy.at("balance-equality"), (Tally{1, 0, 0}));
    EXPECT_EQ(m.accuracy.at("tx-origin-auth"), (Tally{0, 1, 0}));
    // Findings without a matching annotation are false alarms.
    EXPECT_EQ(m.accuracy.at("missing-constructor").false_alarms, 1u);
    ASSERT_TRUE(m.overall);
    EXPECT_EQ(m.overall->tp, 1u);
    const std::string text = render_metrics(m, catalog());
    EXPECT_NE(text.find("balance-equality: 1 / 0 / 0, 100.0%, 100.0%"), std::string::npos);
}

TEST(Metrics, AnnotationErrors) {
    std::istringstream missing_line("a.sol balance-equality\n");
    EXPECT_THROW(parse_annotations(missing_line), ParseError);
    std::istringstream bad_number("a.sol balance-equality x\n");
    EXPECT_THROW(parse_annotations(bad_number), ParseError);
    std::istringstream unknown_rule("a.sol balance-equalty 3\n");
    EXPECT_THROW(parse_annotations(unknown_rule), ParseError);
    std::istringstream comments("# header\n\na.sol balance-equality 3  # trailing\n");
    EXPECT_EQ(parse_annotations(comments).size(), 1u);
}

}  // namespace
