#include <gtest/gtest.h>

#include <algorithm>
#include <variant>

#include "solcheck/detectors.hpp"
#include "solcheck/errors.hpp"
#include "solcheck/loop_analyzer.hpp"
#include "test_support.hpp"

namespace {

using namespace solcheck;
using solcheck::testing::format_text;
using solcheck::testing::load_fixture;
using solcheck::testing::pick;
using solcheck::testing::Rng;

TEST(GasModel, DeriveStmtLimit) {
    EXPECT_EQ(derive_stmt_limit(GasModel{69301, 2928, 0, false}), 23u);
    EXPECT_EQ(derive_stmt_limit(GasModel{2928, 2928, 0, false}), 0u);
    EXPECT_EQ(derive_stmt_limit(GasModel{70272, 2928, 0, false}), 23u);
    EXPECT_EQ(derive_stmt_limit(GasModel{70273, 2928, 0, false}), 24u);
    EXPECT_EQ(derive_stmt_limit(GasModel{0, 2928, 0, false}), 0u);
    EXPECT_THROW(derive_stmt_limit(GasModel{69301, 0, 0, false}), ZeroAverageGas);
    EXPECT_THROW(GasModel::derived(1, 0), ZeroAverageGas);
    const GasModel defaults;
    EXPECT_EQ(defaults.stmt_limit, derive_stmt_limit(defaults));
    EXPECT_TRUE(GasModel::with_limit(25).overridden);
}

TEST(GasModel, DeriveMatchesDefinitionByScan) {
    Rng rng(7);
    for (int n = 0; n < 2000; ++n) {
        const std::uint64_t avg = 1 + pick(rng, 5000);
        const std::uint64_t tx = pick(rng, 200000);
        std::uint64_t best = 0;
        for (std::uint64_t l = 0; avg * l < tx; ++l) best = l;
        EXPECT_EQ(derive_stmt_limit(GasModel{tx, avg, 0, false}), best) << tx << " " << avg;
    }
}

TEST(LoopAnalyzer, LiteralTripCounts) {
    EXPECT_EQ(literal_trip_count("int i = 0; i < 12; i++"), 12u);
    EXPECT_EQ(literal_trip_count("uint i = 0; i <= 256; ++i"), 257u);
    EXPECT_EQ(literal_trip_count("i = 10; i > 0; i--"), 10u);
    EXPECT_EQ(literal_trip_count("uint i = 1; i < 10; i += 3"), 3u);
    EXPECT_EQ(literal_trip_count("uint i = 5; i < 5; i++"), 0u);
    EXPECT_EQ(literal_trip_count("uint i = 0; i < 5; i--"), std::nullopt);
    EXPECT_EQ(literal_trip_count("uint i = 0; i < n; i++"), std::nullopt);
    EXPECT_EQ(literal_trip_count("uint i = 0; j < 5; i++"), std::nullopt);
    EXPECT_EQ(literal_trip_count("uint i = 0; i < 5"), std::nullopt);
    EXPECT_EQ(literal_trip_count("uint i = 0; i < 99999999999999999999999; i++"), UINT64_MAX);
}

TEST(LoopAnalyzer, HeaderPieces) {
    EXPECT_EQ(split_for_header("uint i = f(a;b); i < 3; i++"), (std::vector<std::string>{"uint i = f(a;b)", "i < 3", "i++"}));
    EXPECT_TRUE(split_for_header("a; b").empty());
    EXPECT_EQ(induction_variable("uint256 i = 0"), "i");
    EXPECT_EQ(induction_variable("i = 0"), "i");
    EXPECT_EQ(induction_variable(""), "");
    EXPECT_EQ(condition_identifiers("i < n && ok == true", "i"), (std::vector<std::string>{"n", "ok"}));
    EXPECT_TRUE(condition_identifiers("i < 10 ether", "i").empty());
}

TEST(LoopAnalyzer, FindsAllLoopKinds) {
    const auto fs = load_fixture("loops/nested.sol");
    const auto loops = find_loops(fs);
    ASSERT_EQ(loops.size(), 4u);
    EXPECT_EQ(loops[0].kind, LoopKind::For);
    EXPECT_EQ(loops[0].nested, (std::vector<std::size_t>{1}));
    EXPECT_EQ(loops[0].body_stmt_count, 2u);
    EXPECT_EQ(loops[0].direct_stmt_count, 1u);
    EXPECT_EQ(loops[1].literal_trip_count, 4u);
    EXPECT_EQ(loops[2].kind, LoopKind::While);
    EXPECT_EQ(loops[3].kind, LoopKind::DoWhile);
    EXPECT_EQ(loops[3].body_stmt_count, 1u);
    EXPECT_EQ(fs.line_map[loops[3].header_line], 16u);
    EXPECT_EQ(max_executed_statements(loops, 0), 3u * (4u + 1u));
    EXPECT_EQ(max_executed_statements(loops, 2), std::nullopt);
}

TEST(LoopAnalyzer, SingleStatementBody) {
    const auto loops = find_loops(format_text("function f() {\nfor (uint i = 0; i < 30; i++) x += 1;\n}\n"));
    ASSERT_EQ(loops.size(), 1u);
    EXPECT_FALSE(loops[0].body_span);
    EXPECT_EQ(max_executed_statements(loops, 0), 30u);
}

TEST(CostlyLoop, Thresholds) {
    const auto twelve = load_fixture("loops/twelve_by_two.sol");
    const auto eleven = load_fixture("loops/eleven_by_two.sol");
    ASSERT_EQ(detect("costly-loop", twelve).size(), 1u);
    EXPECT_EQ(detect("costly-loop", twelve)[0].pattern_id, "gas");
    EXPECT_TRUE(detect("costly-loop", eleven).empty());
    DetectOptions relaxed;
    relaxed.gas = GasModel::with_limit(25);
    EXPECT_TRUE(detect("costly-loop", twelve, relaxed).empty());
    DetectOptions strict;
    strict.gas = GasModel::with_limit(21);
    EXPECT_EQ(detect("costly-loop", eleven, strict).size(), 1u);
}

TEST(CostlyLoop, ShapePatterns) {
    auto ids = [](const std::string& body) {
        std::vector<std::string> out;
        for (const auto& f : detect("costly-loop", format_text("function f() {\n" + body + "\n}\n"))) out.push_back(f.pattern_id);
        return out;
    };
    EXPECT_EQ(ids("for (uint i = 0; i < arr.length; i++) {\n}"), (std::vector<std::string>{"2.14"}));
    EXPECT_EQ(ids("while (msg.value > 0) {\n}"), (std::vector<std::string>{"2.15"}));
    EXPECT_EQ(ids("for (uint i = 0; i < n; i++) {\n}"), (std::vector<std::string>{"2.16"}));
    EXPECT_EQ(ids("for (uint i = 0; i < 5; i++) {\n}"), (std::vector<std::string>{}));
    EXPECT_EQ(ids("while (true) {\n}"), (std::vector<std::string>{}));
}

// Oracle: nested counting loops built at random, executed by a direct
// simulation, compared with the analytic bound.
struct GenLoop {
    long init = 0;
    std::string op;
    long bound = 0;
    long step = 1;
    std::vector<std::variant<int, GenLoop>> body;  // int = plain statement
};

long simulate(const GenLoop& l) {
    auto holds = [&](long x) {
        if (l.op == "<") return x < l.bound;
        if (l.op == "<=") return x <= l.bound;
        if (l.op == ">") return x > l.bound;
        return x >= l.bound;
    };
    long executed = 0;
    for (long x = l.init; holds(x); x += l.step) {
        for (const auto& item : l.body) {
            executed += std::holds_alternative<int>(item) ? 1 : simulate(std::get<GenLoop>(item));
        }
    }
    return executed;
}

GenLoop random_loop(Rng& rng, int depth) {
    GenLoop l;
    const bool up = pick(rng, 2) == 0;
    l.op = up ? (pick(rng, 2) ? "<" : "<=") : (pick(rng, 2) ? ">" : ">=");
    l.init = static_cast<long>(pick(rng, 12));
    l.bound = static_cast<long>(pick(rng, 12));
    l.step = static_cast<long>(1 + pick(rng, 3));
    if (!up) l.step = -l.step;
    const std::size_t items = pick(rng, 4);
    for (std::size_t i = 0; i < items; ++i) {
        if (depth < 3 && pick(rng, 3) == 0) {
            l.body.emplace_back(random_loop(rng, depth + 1));
        } else {
            l.body.emplace_back(0);
        }
    }
    return l;
}

void emit(const GenLoop& l, int depth, std::string& out) {
    const std::string v = "i" + std::to_string(depth);
    std::string step;
    if (l.step == 1) step = v + "++";
    else if (l.step == -1) step = v + "--";
    else step = v + (l.step > 0 ? " += " : " -= ") + std::to_string(std::labs(l.step));
    out += "for (int " + v + " = " + std::to_string(l.init) + "; " + v + " " + l.op + " " + std::to_string(l.bound) +
           "; " + step + ") {\n";
    for (const auto& item : l.body) {
        if (std::holds_alternative<int>(item)) {
            out += "total += 1;\n";
        } else {
            emit(std::get<GenLoop>(item), depth + 1, out);
        }
    }
    out += "}\n";
}

TEST(LoopAnalyzer, BoundMatchesSimulation) {
    Rng rng(20240917);
    for (int n = 0; n < 500; ++n) {
        const GenLoop l = random_loop(rng, 0);
        std::string text = "contract C {\nuint total;\nfunction f() public {\n";
        emit(l, 0, text);
        text += "}\n}\n";
        const auto fs = format_text(text);
        const auto loops = find_loops(fs);
        ASSERT_FALSE(loops.empty());
        const auto bound = max_executed_statements(loops, 0);
        ASSERT_TRUE(bound) << text;
        EXPECT_EQ(*bound, static_cast<std::uint64_t>(simulate(l))) << text;

        const auto found = detect("costly-loop", fs);
        const bool outer_flagged =
            std::any_of(found.begin(), found.end(), [&](const Finding& f) { return f.formatted_line == loops[0].header_line + 1; });
        EXPECT_EQ(outer_flagged, *bound > 23u) << text;
    }
}

}  // namespace
