#include <gtest/gtest.h>

#include <set>

#include "guard_eval.hpp"
#include "solcheck/overflow_guard.hpp"
#include "test_support.hpp"

namespace {

using namespace solcheck;
using solcheck::testing::Env;
using solcheck::testing::eval_guard;
using solcheck::testing::format_text;
using solcheck::testing::load_fixture;
using solcheck::testing::U256;

std::string body(const std::string& stmts) { return "contract C {\nfunction f() public {\n" + stmts + "}\n}\n"; }

TEST(OverflowMatch, Forms) {
    auto b = match_integer_op("uint256 amount = uint256(cnt) * _value;");
    ASSERT_TRUE(b);
    EXPECT_EQ(b->form, OpForm::Binary);
    EXPECT_EQ(b->op, "*");
    EXPECT_EQ(b->ope1, "amount");
    EXPECT_EQ(b->ope2, "uint256(cnt)");
    EXPECT_EQ(b->ope3, "_value");
    auto c = match_integer_op("balances[to] += value;");
    ASSERT_TRUE(c);
    EXPECT_EQ(c->form, OpForm::Compound);
    EXPECT_EQ(c->op, "+=");
    EXPECT_EQ(c->ope1, "balances[to]");
    EXPECT_EQ(c->ope2, "value");
    EXPECT_FALSE(match_integer_op("require(a + b > c);"));
    EXPECT_FALSE(match_integer_op("for (i = 0; i < n; i += 1) {"));
    EXPECT_FALSE(match_integer_op("a = b + c + d;"));
    EXPECT_FALSE(match_integer_op("a == b + c;"));
    EXPECT_FALSE(match_integer_op("x = y;"));
}

TEST(OverflowPlan, TemplateTexts) {
    struct Case {
        const char* line;
        const char* before;
        const char* after;
    };
    const Case cases[] = {
        {"c = a + b;", nullptr, "require(c>=a);"},
        {"c = a - b;", nullptr, "require(c<=a);"},
        {"c = a * b;", nullptr, "require(a==0 || c/a==b);"},
        {"c = a / b;", nullptr, "require(b>0);"},
        {"c = a % b;", nullptr, "require(b!=0);"},
        {"a += b;", nullptr, "require(a>=b);"},
        {"a -= b;", "uint256 anti_overflow_temp_1 = a;", "require(anti_overflow_temp_1 >= b);"},
        {"a *= b;", "uint256 anti_overflow_temp_1 = a;", "require(b==0 || a/b==anti_overflow_temp_1);"},
        {"a /= b;", nullptr, "require(b>0);"},
        {"a %= b;", nullptr, "require(b!=0);"},
    };
    for (const auto& c : cases) {
        std::size_t counter = 0;
        const auto g = plan_guard(*match_integer_op(c.line), counter);
        EXPECT_EQ(g.after, c.after) << c.line;
        if (c.before) {
            EXPECT_EQ(g.before, std::string(c.before)) << c.line;
            EXPECT_EQ(counter, 1u);
        } else {
            EXPECT_FALSE(g.before) << c.line;
            EXPECT_EQ(counter, 0u);
        }
    }
}

TEST(OverflowInstrument, BecBatchTransfer) {
    const auto fs = load_fixture("instrument/BecBatchTransfer.sol");
    const auto is = overflow_instrument(fs);
    ASSERT_EQ(is.insertions.size(), 1u);
    const auto& ins = is.insertions[0];
    EXPECT_EQ(ins.text, "require(uint256(cnt)==0 || amount/uint256(cnt)==_value);");
    EXPECT_EQ(ins.anchor_line, 6u);
    EXPECT_EQ(solcheck::map_line(fs, ins.anchor_line), 8u);
    EXPECT_EQ(is.lines[ins.output_line - 2], "uint256 amount = uint256(cnt) * _value;");
    EXPECT_EQ(is.indented_text(), solcheck::testing::read_text(solcheck::testing::golden_path("BecBatchTransfer.overflow_guarded.sol")));
}

TEST(OverflowInstrument, IdempotentAndRoundTrips) {
    const auto fs = format_text(body("a = b + c;\nx -= y;\nm *= n;\nq = r / s;\nt %= u;\nx -= y;\n"));
    const auto once = overflow_instrument(fs);
    EXPECT_EQ(once.strip_insertions(), fs.lines);
    const auto twice = overflow_instrument(once.as_formatted());
    EXPECT_TRUE(twice.insertions.empty());
    EXPECT_EQ(twice.lines, once.lines);
}

TEST(OverflowInstrument, TempNamesAreUnique) {
    const auto is = overflow_instrument(format_text(body("a -= 1;\nb *= 2;\na -= 3;\nc += 4;\n")));
    std::set<std::string> temps;
    std::size_t befores = 0;
    for (const auto& ins : is.insertions) {
        if (ins.kind != InsertionKind::GuardBefore) continue;
        ++befores;
        temps.insert(ins.text.substr(0, ins.text.find(" =")));
    }
    EXPECT_EQ(befores, 3u);
    EXPECT_EQ(temps.size(), 3u);
    EXPECT_EQ(is.insertions.size(), 3u + 4u);
}

TEST(OverflowInstrument, Scope) {
    // State initialisers, SafeMath libraries and SafeMath-shaped helpers are left alone.
    const auto fs = format_text(
        "library SafeMath {\nfunction add(uint a, uint b) internal returns (uint) {\nuint c = a + b;\nrequire(c >= a);\n"
        "return c;\n}\n}\n"
        "contract T {\nuint x = 1 + 2;\n"
        "function mul(uint256 a, uint256 b) internal returns (uint256) {\nuint256 c = a * b;\nreturn c;\n}\n"
        "function f(uint v) public {\nx += v;\n}\n}\n");
    const auto ops = find_integer_ops(fs);
    ASSERT_EQ(ops.size(), 1u);
    EXPECT_EQ(fs.lines[ops[0].formatted_line], "x += v;");
}

TEST(OverflowInstrument, NothingToGuard) {
    const auto fs = load_fixture("listings/pragma_forms.sol");
    const auto is = overflow_instrument(fs);
    EXPECT_TRUE(is.insertions.empty());
    EXPECT_EQ(is.lines, fs.lines);
}

// The emitted guard is evaluated on the wrapped result and must fail exactly
// when the 256-bit result differs from the exact one.
class GuardOracle : public ::testing::TestWithParam<std::string> {};

TEST_P(GuardOracle, BinaryAndCompound) {
    const std::string op = GetParam();
    using boost::multiprecision::cpp_int;
    const cpp_int modulus = cpp_int(1) << 256;
    solcheck::testing::Rng rng(0x5eed0000u + static_cast<unsigned>(op[0]));
    std::size_t counter = 0;
    const auto binary = plan_guard(*match_integer_op("r = x " + op + " y;"), counter);
    const auto compound = plan_guard(*match_integer_op("x " + op + "= y;"), counter);
    for (int n = 0; n < 10000; ++n) {
        const U256 x = solcheck::testing::random_u256(rng);
        const U256 y = solcheck::testing::random_u256(rng);
        cpp_int exact;
        if (op == "+") exact = cpp_int(x) + cpp_int(y);
        else if (op == "-") exact = cpp_int(x) - cpp_int(y);
        else exact = cpp_int(x) * cpp_int(y);
        cpp_int wrapped_big = exact % modulus;
        if (wrapped_big < 0) wrapped_big += modulus;
        const U256 wrapped = static_cast<U256>(wrapped_big);
        const bool overflowed = cpp_int(wrapped) != exact;

        Env env{{"x", x}, {"y", y}, {"r", wrapped}};
        ASSERT_EQ(eval_guard(binary.after, env), !overflowed) << binary.after << " x=" << x << " y=" << y;

        Env cenv{{"x", wrapped}, {"y", y}};
        if (compound.before) cenv[compound.temp_name] = x;
        ASSERT_EQ(eval_guard(compound.after, cenv), !overflowed) << compound.after << " x=" << x << " y=" << y;
    }
}

INSTANTIATE_TEST_SUITE_P(Operators, GuardOracle, ::testing::Values("+", "-", "*"),
                         [](const auto& info) {
                             return info.param == "+" ? std::string("Add") : info.param == "-" ? "Sub" : "Mul";
                         });

TEST(GuardOracle, DivisionAndModulo) {
    std::size_t counter = 0;
    for (const char* op : {"/", "%"}) {
        const auto g = plan_guard(*match_integer_op(std::string("r = x ") + op + " y;"), counter);
        EXPECT_FALSE(eval_guard(g.after, Env{{"x", 5}, {"y", 0}, {"r", 0}}));
        EXPECT_TRUE(eval_guard(g.after, Env{{"x", 5}, {"y", 2}, {"r", 0}}));
        const auto c = plan_guard(*match_integer_op(std::string("x ") + op + "= y;"), counter);
        EXPECT_FALSE(eval_guard(c.after, Env{{"x", 5}, {"y", 0}}));
        EXPECT_TRUE(eval_guard(c.after, Env{{"x", 5}, {"y", 3}}));
    }
}

}  // namespace
