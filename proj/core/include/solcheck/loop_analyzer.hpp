#pragma once

// Costly-loop analysis: condition shape plus a bound on the number of
// statements a loop can execute.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "solcheck/blocks.hpp"
#include "solcheck/formatter.hpp"
#include "solcheck/gas_model.hpp"
#include "solcheck/rule_engine.hpp"

namespace solcheck {

enum class LoopKind { For, While, DoWhile };

struct LoopSite {
    std::size_t header_line = 0;  // 0-based; for do-while, the `while (...)` line after the `}`
    LoopKind kind = LoopKind::For;
    std::string condition;        // text between the header parentheses
    /// Block body lines, inclusive and 0-based. Absent for a single-statement
    /// or empty body written on the header line.
    std::optional<std::pair<std::size_t, std::size_t>> body_span;
    std::optional<std::uint64_t> literal_trip_count;
    std::size_t body_stmt_count = 0;    // `;`-terminated lines in the body, nested loops included once
    std::size_t direct_stmt_count = 0;  // the same, excluding lines of nested loops
    std::vector<std::size_t> nested;    // indices of directly nested loops

    bool contains(std::size_t line) const {
        return body_span && body_span->first <= line && line <= body_span->second;
    }
};

/// Every for/while/do-while loop, ordered by first line. Throws UnbalancedBraces.
std::vector<LoopSite> find_loops(const FormattedSource& fs);
std::vector<LoopSite> find_loops(const FormattedSource& fs, const BlockIndex& blocks);

/// Trip count of a canonical counting header `init; cond; step` whose bounds
/// are integer literals: `i < B`, `i <= B`, `i > B`, `i >= B` with `i++`,
/// `i--`, `i += k` or `i -= k`. Absent for any other shape and for loops that
/// never terminate. Saturates at UINT64_MAX.
std::optional<std::uint64_t> literal_trip_count(const std::string& for_header_inside);

/// trip count x (direct statements + nested maxima), when every trip count
/// involved is known. Saturates at UINT64_MAX.
std::optional<std::uint64_t> max_executed_statements(const std::vector<LoopSite>& loops, std::size_t site);

/// Identifiers in a loop condition other than `exempt`, literal keywords
/// (`true`, `false`) and denomination units.
std::vector<std::string> condition_identifiers(const std::string& condition, const std::string& exempt = {});

/// Variable assigned in a for-header init clause (`uint i = 0` -> `i`), if any.
std::string induction_variable(const std::string& init_clause);

/// Splits a for-header on its two top-level semicolons. Empty when the text
/// does not have exactly three clauses.
std::vector<std::string> split_for_header(const std::string& inside);

/// The costly-loop rule: one finding per loop whose condition matches the
/// rule's patterns or whose statement bound exceeds the gas model's limit.
std::vector<Finding> detect_costly_loop(const RuleSpec& rule, const Scan& scan);

}  // namespace solcheck
