#include "solcheck/overflow_guard.hpp"

#include <boost/regex.hpp>

#include "solcheck/blocks.hpp"

namespace solcheck {

std::optional<IntegerOpStatement> match_integer_op(std::string_view line) {
    static const boost::regex binary(
        R"(^(?:\w+\s+)?([\w()\[\].]+)\s*=\s*([\w()\[\].]+)\s*([-+*/%])\s*([\w()\[\].]+)\s*;$)");
    static const boost::regex compound(R"(^(?:\w+\s+)?([\w()\[\].]+)\s*([-+*/%]=)\s*([\w()\[\].]+)\s*;$)");
    static const boost::regex excluded(R"(^(?:require|assert|for)\s*\()");

    const std::string text(line);
    if (boost::regex_search(text, excluded)) return std::nullopt;
    boost::smatch m;
    IntegerOpStatement s;
    if (boost::regex_match(text, m, binary)) {
        s.form = OpForm::Binary;
        s.ope1 = m[1].str();
        s.ope2 = m[2].str();
        s.op = m[3].str();
        s.ope3 = m[4].str();
        return s;
    }
    if (boost::regex_match(text, m, compound)) {
        s.form = OpForm::Compound;
        s.ope1 = m[1].str();
        s.op = m[2].str();
        s.ope2 = m[3].str();
        return s;
    }
    return std::nullopt;
}

std::vector<IntegerOpStatement> find_integer_ops(const FormattedSource& fs) {
    static const boost::regex safemath_helper(
        R"(^function\s+(?:add|sub|mul|div|mod)\s*\(\s*uint(?:256)?\s+[\w$]+\s*,\s*uint(?:256)?\s+[\w$]+\s*\))");

    BlockIndex blocks(fs);
    // Statements inside any brace pair qualify, so a bare function body works
    // too; contract state declarations do not.
    std::vector<bool> eligible(fs.size(), false);
    for (std::size_t i = 0; i < fs.size(); ++i) eligible[i] = blocks.depth_before(i) > 0;
    for (const auto& c : find_contracts(fs, blocks)) {
        const int state_depth = blocks.depth_before(c.header) + 1;
        const bool safemath = c.kind == ContractKind::Library && c.name.find("SafeMath") != std::string::npos;
        for (std::size_t i = c.header + 1; i < c.close; ++i) {
            if (safemath || blocks.depth_before(i) == state_depth) eligible[i] = false;
        }
        for (const auto& f : find_functions(fs, blocks, c)) {
            if (!f.has_body() || !boost::regex_search(fs.lines[f.header], safemath_helper)) continue;
            for (std::size_t i = f.header; i <= *f.close; ++i) eligible[i] = false;
        }
    }

    std::vector<IntegerOpStatement> out;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        if (!eligible[i]) continue;
        if (auto s = match_integer_op(fs.lines[i])) {
            s->formatted_line = i;
            out.push_back(std::move(*s));
        }
    }
    return out;
}

GuardPlan plan_guard(const IntegerOpStatement& stmt, std::size_t& counter) {
    GuardPlan g;
    g.target = stmt;
    const std::string& a = stmt.ope1;
    const std::string& b = stmt.ope2;
    const std::string& c = stmt.ope3;
    const std::string& op = stmt.op;
    if (op == "+") {
        g.after = "require(" + a + ">=" + b + ");";
    } else if (op == "-") {
        g.after = "require(" + a + "<=" + b + ");";
    } else if (op == "*") {
        g.after = "require(" + b + "==0 || " + a + "/" + b + "==" + c + ");";
    } else if (op == "/") {
        g.after = "require(" + c + ">0);";
    } else if (op == "%") {
        g.after = "require(" + c + "!=0);";
    } else if (op == "+=") {
        g.after = "require(" + a + ">=" + b + ");";
    } else if (op == "-=" || op == "*=") {
        g.temp_name = "anti_overflow_temp_" + std::to_string(++counter);
        g.before = "uint256 " + g.temp_name + " = " + a + ";";
        if (op == "-=") {
            g.after = "require(" + g.temp_name + " >= " + b + ");";
        } else {
            g.after = "require(" + b + "==0 || " + a + "/" + b + "==" + g.temp_name + ");";
        }
    } else if (op == "/=") {
        g.after = "require(" + b + ">0);";
    } else if (op == "%=") {
        g.after = "require(" + b + "!=0);";
    }
    return g;
}

InstrumentedSource overflow_instrument(const FormattedSource& fs) {
    InstrumentedSource base = InstrumentedSource::identity(fs);
    InsertionPlan plan;
    std::size_t counter = 0;
    for (const auto& stmt : find_integer_ops(fs)) {
        GuardPlan g = plan_guard(stmt, counter);
        const std::size_t i = stmt.formatted_line;
        if (i + 1 < fs.size() && fs.lines[i + 1] == g.after) continue;
        if (g.before) plan.before(i, InsertionKind::GuardBefore, *g.before);
        plan.after(i, InsertionKind::GuardAfter, g.after);
    }
    if (plan.empty()) return base;
    return plan.apply(base);
}

}  // namespace solcheck
