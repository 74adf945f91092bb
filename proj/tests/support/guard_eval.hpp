#pragma once

// Evaluates the `require(...)` guards emitted by the overflow rewriter over
// 256-bit unsigned values. Grammar: or-chains of comparisons between
// quotients of identifiers, literals and parenthesised expressions.

#include <cctype>
#include <map>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace solcheck::testing {

using U256 = boost::multiprecision::uint256_t;
using Env = std::map<std::string, U256>;

class GuardEval {
public:
    GuardEval(const std::string& text, const Env& env) : s_(text), env_(env) {}

    /// Value of `require(<expr>);`, nonzero meaning the guard passes.
    bool run() {
        expect_word("require");
        expect('(');
        const U256 v = disj(true);
        expect(')');
        expect(';');
        skip_ws();
        if (i_ != s_.size()) fail("trailing text");
        return v != 0;
    }

private:
    U256 disj(bool live) {
        U256 v = cmp(live);
        while (peek("||")) {
            i_ += 2;
            const bool rhs_live = live && v == 0;
            const U256 r = cmp(rhs_live);
            if (v == 0) v = r != 0 ? 1 : 0;
        }
        return v;
    }

    U256 cmp(bool live) {
        const U256 a = quot(live);
        static const char* const ops[] = {">=", "<=", "==", "!=", ">", "<"};
        for (const char* op : ops) {
            if (!peek(op)) continue;
            i_ += std::char_traits<char>::length(op);
            const U256 b = quot(live);
            const std::string o = op;
            bool r = false;
            if (o == ">=") r = a >= b;
            else if (o == "<=") r = a <= b;
            else if (o == "==") r = a == b;
            else if (o == "!=") r = a != b;
            else if (o == ">") r = a > b;
            else r = a < b;
            return r ? 1 : 0;
        }
        return a;
    }

    U256 quot(bool live) {
        U256 v = atom(live);
        while (peek("/")) {
            ++i_;
            const U256 d = atom(live);
            if (!live) continue;
            if (d == 0) fail("division by zero on a live branch");
            v /= d;
        }
        return v;
    }

    U256 atom(bool live) {
        skip_ws();
        if (i_ < s_.size() && s_[i_] == '(') {
            ++i_;
            const U256 v = disj(live);
            expect(')');
            return v;
        }
        const std::size_t b = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' || s_[i_] == '.' ||
                                  s_[i_] == '[' || s_[i_] == ']')) {
            ++i_;
        }
        if (b == i_) fail("expected operand");
        const std::string tok = s_.substr(b, i_ - b);
        if (std::isdigit(static_cast<unsigned char>(tok[0]))) return U256(tok);
        auto it = env_.find(tok);
        if (it == env_.end()) fail("unbound name " + tok);
        return it->second;
    }

    void skip_ws() {
        while (i_ < s_.size() && s_[i_] == ' ') ++i_;
    }
    bool peek(const char* t) {
        skip_ws();
        return s_.compare(i_, std::char_traits<char>::length(t), t) == 0;
    }
    void expect(char c) {
        skip_ws();
        if (i_ >= s_.size() || s_[i_] != c) fail(std::string("expected ") + c);
        ++i_;
    }
    void expect_word(const char* w) {
        if (!peek(w)) fail(std::string("expected ") + w);
        i_ += std::char_traits<char>::length(w);
    }
    [[noreturn]] void fail(const std::string& why) const {
        throw std::runtime_error("guard '" + s_ + "': " + why + " at " + std::to_string(i_));
    }

    std::string s_;
    const Env& env_;
    std::size_t i_ = 0;
};

inline bool eval_guard(const std::string& text, const Env& env) { return GuardEval(text, env).run(); }

}  // namespace solcheck::testing
