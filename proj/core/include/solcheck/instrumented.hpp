#pragma once

// Rewritten source with a ledger of every inserted line, shared by the
// re-entrancy and overflow rewriters.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "solcheck/formatter.hpp"

namespace solcheck {

enum class InsertionKind { VaccineA, VaccineB, VaccineC, VaccineD, DepositTest, GuardBefore, GuardAfter };

const char* to_string(InsertionKind k) noexcept;

struct Insertion {
    std::size_t output_line = 0;  // 1-based line in the rewritten text
    std::size_t anchor_line = 0;  // 1-based origin line the insertion is attached to
    InsertionKind kind = InsertionKind::VaccineA;
    std::string text;
};

struct InstrumentedSource {
    FormattedSource origin;
    std::vector<std::string> lines;
    /// Per output line: 0-based origin line, or nullopt for an inserted line.
    std::vector<std::optional<std::size_t>> origin_index;
    std::vector<Insertion> insertions;  // ascending output_line
    std::vector<std::string> notices;

    static InstrumentedSource identity(FormattedSource fs);

    /// Output with every recorded insertion removed.
    std::vector<std::string> strip_insertions() const;
    /// Lines joined with newlines, one trailing newline when non-empty.
    std::string text() const;
    /// text() with each line indented four spaces per enclosing brace.
    std::string indented_text() const;
    /// The rewritten text as a FormattedSource; inserted lines map to their anchor.
    FormattedSource as_formatted() const;
};

/// `second` rewritten from `first.as_formatted()`, re-expressed against
/// `first.origin` so that both passes' insertions are recorded.
InstrumentedSource compose(const InstrumentedSource& first, const InstrumentedSource& second);

/// Lines to place around origin lines. Applying a plan keeps earlier
/// insertions and adds the new ones in the order they were planned.
class InsertionPlan {
public:
    void before(std::size_t origin_index, InsertionKind kind, std::string text);
    void after(std::size_t origin_index, InsertionKind kind, std::string text);
    bool empty() const noexcept { return before_.empty() && after_.empty(); }

    InstrumentedSource apply(const InstrumentedSource& base) const;

private:
    struct Line {
        InsertionKind kind;
        std::string text;
    };
    std::map<std::size_t, std::vector<Line>> before_;
    std::map<std::size_t, std::vector<Line>> after_;
};

}  // namespace solcheck
