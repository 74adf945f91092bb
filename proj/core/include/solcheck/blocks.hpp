#pragma once

// Bracket matching over formatted lines. Every contract/function/loop scope
// the detectors need is recovered from brace pairs; there is no parser.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "solcheck/formatter.hpp"

namespace solcheck {

/// Brace structure of a FormattedSource. Line indices here are 0-based.
class BlockIndex {
public:
    /// Throws UnbalancedBraces if any brace outside a string literal is unmatched.
    explicit BlockIndex(const FormattedSource& fs);

    /// Nesting depth at the start of line `i`.
    int depth_before(std::size_t i) const { return depth_.at(i); }
    /// Index of the line holding the `}` that closes the last `{` on line `i`,
    /// or nullopt if line `i` opens nothing.
    std::optional<std::size_t> closing_line(std::size_t i) const;
    /// Index of the line holding the `{` that the first `}` on line `i` closes.
    std::optional<std::size_t> opening_line(std::size_t i) const;

    std::size_t size() const noexcept { return depth_.size(); }

private:
    std::vector<int> depth_;
    std::vector<std::ptrdiff_t> close_of_;
    std::vector<std::ptrdiff_t> open_of_;
};

/// Counts `{` and `}` in `line`, skipping string literals.
struct BraceCount {
    int open = 0;
    int close = 0;
};
BraceCount count_braces(std::string_view line);

/// `line` with the contents of string literals removed (quotes kept).
std::string mask_strings(std::string_view line);

enum class ContractKind { Contract, Interface, Library };

struct ContractBlock {
    ContractKind kind = ContractKind::Contract;
    std::string name;
    std::vector<std::string> bases;  // names from the `is` clause
    std::size_t header = 0;          // 0-based formatted line
    std::size_t close = 0;           // line holding the closing `}`
};

/// Every contract/interface/library header whose line ends with `{`.
std::vector<ContractBlock> find_contracts(const FormattedSource& fs, const BlockIndex& blocks);

enum class Visibility { Default, Public, External, Internal, Private };

struct FunctionBlock {
    std::string name;  // empty for the unnamed fallback
    std::string params;
    Visibility visibility = Visibility::Default;
    bool payable = false;
    std::size_t header = 0;
    std::optional<std::size_t> close;  // nullopt for a declaration without body

    bool has_body() const { return close.has_value(); }
    bool externally_callable() const {
        return visibility == Visibility::Default || visibility == Visibility::Public ||
               visibility == Visibility::External;
    }
    bool takes_arguments() const;
};

/// `function`, `constructor`, `fallback` and `receive` definitions directly
/// inside `contract`.
std::vector<FunctionBlock> find_functions(const FormattedSource& fs, const BlockIndex& blocks,
                                          const ContractBlock& contract);

/// Position of the ')' matching the '(' at `open`, or nullopt when `text[open]`
/// is not '(' or the parenthesis is unbalanced. String literals are skipped.
std::optional<std::size_t> matching_paren(std::string_view text, std::size_t open);

}  // namespace solcheck
