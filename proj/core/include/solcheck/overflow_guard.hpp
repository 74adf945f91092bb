#pragma once

// Integer-overflow prevention: arithmetic assignments get a `require`
// guard after them, with a saved operand before `-=` and `*=`.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "solcheck/formatter.hpp"
#include "solcheck/instrumented.hpp"

namespace solcheck {

enum class OpForm { Binary, Compound };

struct IntegerOpStatement {
    std::size_t formatted_line = 0;  // 0-based
    OpForm form = OpForm::Binary;
    std::string op;  // "+", "-", "*", "/", "%" or "+=", "-=", "*=", "/=", "%="
    std::string ope1;
    std::string ope2;
    std::string ope3;  // empty for Compound

    friend bool operator==(const IntegerOpStatement&, const IntegerOpStatement&) = default;
};

/// `ope1 = ope2 op ope3;` (optionally with one leading type word) or
/// `ope1 op= ope2;`. Lines opening with require/assert/for are rejected.
std::optional<IntegerOpStatement> match_integer_op(std::string_view line);

/// Every matching line inside a function or modifier body, skipping
/// SafeMath libraries and add/sub/mul/div/mod helpers shaped like SafeMath.
/// Throws UnbalancedBraces.
std::vector<IntegerOpStatement> find_integer_ops(const FormattedSource& fs);

struct GuardPlan {
    IntegerOpStatement target;
    std::optional<std::string> before;
    std::string after;
    std::string temp_name;  // empty unless `before` is set
};

/// Guard text for `stmt`. `counter` is the last temp number used and is
/// incremented for `-=` and `*=`.
GuardPlan plan_guard(const IntegerOpStatement& stmt, std::size_t& counter);

/// Applies every plan in line order. A statement already followed by its
/// exact after-guard is left alone. Throws UnbalancedBraces.
InstrumentedSource overflow_instrument(const FormattedSource& fs);

}  // namespace solcheck
