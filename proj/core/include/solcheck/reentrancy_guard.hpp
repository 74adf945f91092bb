#pragma once

// Re-entrancy prevention: dangerous `call.value` statements, call chains
// inside a contract, the ledger mapping, and the vaccine rewrite.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "solcheck/blocks.hpp"
#include "solcheck/formatter.hpp"
#include "solcheck/instrumented.hpp"

namespace solcheck {

struct DangerousStatement {
    std::size_t formatted_line = 0;  // 0-based
    std::string receiver_expr;       // text before `.call`
    std::string value_expr;          // argument of `value(...)`

    friend bool operator==(const DangerousStatement&, const DangerousStatement&) = default;
};

/// The first `X.call.value(E)()` / `X.call.value(E)("")` on `line`, if any.
std::optional<DangerousStatement> match_dangerous(std::string_view line);

std::vector<DangerousStatement> find_dangerous_statements(const FormattedSource& fs);

struct FunctionInfo {
    std::string name;
    std::string contract;
    std::size_t header_line = 0;
    std::optional<std::pair<std::size_t, std::size_t>> body_span;  // lines strictly inside the braces
    std::vector<std::string> calls;  // same-contract functions invoked in the body, first-call order
    bool contains_dangerous = false;
    bool externally_callable = false;
    bool takes_arguments = false;
    bool constructor = false;  // `constructor` or a function named after the contract
    bool unnamed = false;      // fallback or receive
};

/// Functions with bodies declared directly in `contract`, in header order.
std::vector<FunctionInfo> function_infos(const FormattedSource& fs, const BlockIndex& blocks,
                                         const ContractBlock& contract);

struct CallChain {
    std::string contract;
    std::vector<std::string> functions;  // head first, tail last

    friend bool operator==(const CallChain&, const CallChain&) = default;
};

/// Upper bound on chains enumerated per contract.
inline constexpr std::size_t kMaxChainsPerContract = 4096;

/// Acyclic caller paths from an externally callable head to a function
/// holding a dangerous statement, for every contract. Throws UnbalancedBraces.
std::vector<CallChain> build_call_chains(const FormattedSource& fs);
std::vector<CallChain> build_call_chains(const std::vector<FunctionInfo>& functions);

struct LedgerRef {
    std::size_t declaration_line = 0;
    std::string variable_name;

    friend bool operator==(const LedgerRef&, const LedgerRef&) = default;
};

/// First `mapping (address => uint|uint256)` state variable of `contract`.
std::optional<LedgerRef> locate_ledger(const FormattedSource& fs, const BlockIndex& blocks,
                                       const ContractBlock& contract);
/// Ledger of the first contract that declares one.
std::optional<LedgerRef> locate_ledger(const FormattedSource& fs);

/// Vaccines A-D in every contract that has both a ledger and a dangerous
/// statement. Contracts lacking a ledger are left alone with a notice.
/// Throws UnbalancedBraces.
InstrumentedSource insert_vaccines(const FormattedSource& fs);

/// Appends the `deposit_test` probe to each contract that received vaccines.
InstrumentedSource insert_deposit_test(const InstrumentedSource& is);

/// insert_vaccines followed by insert_deposit_test.
InstrumentedSource reentrancy_instrument(const FormattedSource& fs);

}  // namespace solcheck
