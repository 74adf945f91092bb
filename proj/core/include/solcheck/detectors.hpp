#pragma once

// The fixed 18-rule catalog and the rules that need more than one line.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "solcheck/formatter.hpp"
#include "solcheck/rule_engine.hpp"

namespace solcheck {

/// Compiles a fresh copy of the catalog. Throws PatternCompileError.
std::vector<RuleSpec> load_catalog();

/// Shared compiled catalog, built on first use.
const std::vector<RuleSpec>& catalog();

/// Catalog entry by id. Throws std::out_of_range.
const RuleSpec& catalog_rule(std::string_view id);

struct SolidityVersion {
    int major = 0;
    int minor = 0;
    int patch = 0;

    friend auto operator<=>(const SolidityVersion&, const SolidityVersion&) = default;
    std::string str() const;
};

struct CompilerVersionCheck {
    std::vector<Finding> findings;
    std::optional<SolidityVersion> version;  // lowest bound of the first `pragma solidity`
};

std::vector<Finding> detect_missing_constructor(const RuleSpec& rule, const Scan& scan);
std::vector<Finding> detect_locked_money(const RuleSpec& rule, const Scan& scan);
std::vector<Finding> detect_token_api_violation(const RuleSpec& rule, const Scan& scan);
std::vector<Finding> detect_redundant_refusal(const RuleSpec& rule, const Scan& scan);
CompilerVersionCheck detect_compiler_version(const RuleSpec& rule, const Scan& scan);
std::vector<Finding> detect_private_modifier(const RuleSpec& rule, const Scan& scan);
std::vector<Finding> detect_style_guide(const RuleSpec& rule, const Scan& scan);
std::vector<Finding> detect_implicit_visibility(const RuleSpec& rule, const Scan& scan);

/// Lowest version admitted by the first `pragma solidity` line, if any.
std::optional<SolidityVersion> declared_version(const FormattedSource& fs);

/// Contract names, `is` clauses and token-standard roots declared in `fs`.
/// Throws UnbalancedBraces.
InheritanceIndex index_inheritance(const FormattedSource& fs);

/// Findings of one catalog rule on `fs`, using the shared catalog.
std::vector<Finding> detect(std::string_view rule_id, const FormattedSource& fs, const DetectOptions& options = {});

}  // namespace solcheck
