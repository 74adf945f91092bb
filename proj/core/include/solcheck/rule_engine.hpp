#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <boost/regex.hpp>

#include "solcheck/blocks.hpp"
#include "solcheck/formatter.hpp"
#include "solcheck/gas_model.hpp"

namespace solcheck {

enum class Severity { High, Medium, Low };

const char* to_string(Severity s) noexcept;

enum class Logic { PerLine, Compound };

enum class PatternRole {
    Match,    // a hit reports the line
    Exclude,  // a hit vetoes the line
    Aux,      // consulted only by the rule's own logic
};

/// One catalog regex. `keywords` are literal substrings every match of the
/// pattern contains; a line holding none of them is never handed to the regex.
struct Pattern {
    std::string id;  // formula number, e.g. "2.14"
    std::string source;
    PatternRole role = PatternRole::Match;
    std::vector<std::string> keywords;
    /// Extra check on a regex hit; the line matches only if it returns true.
    std::function<bool(const boost::smatch&)> accept;
    /// Literal form of the formula, kept when it differs from `source` and
    /// still compiles. Used by differential tests.
    std::optional<std::string> reference_form;

    boost::regex re;  // filled by compile()
    void compile(const std::string& rule_id);
};

struct Finding {
    std::string rule_id;
    std::string pattern_id;          // formula that triggered, e.g. "2.27"
    std::size_t formatted_line = 0;  // 1-based
    std::size_t original_line = 0;   // 1-based
    std::string excerpt;
    std::string message;
    std::string suggestion;
    Severity severity = Severity::Low;

    friend bool operator==(const Finding&, const Finding&) = default;
};

/// Contract names and `is` clauses seen across a batch, so token-standard
/// roots declared in one file are visible to inheritors in another.
struct InheritanceIndex {
    std::map<std::string, std::vector<std::string>> bases;
    std::set<std::string> roots;

    void merge(const InheritanceIndex& other);
};

struct DetectOptions {
    bool prefilter = true;
    GasModel gas;
    const InheritanceIndex* batch = nullptr;
};

struct RuleSpec;
class Scan;

using CompoundFn = std::function<std::vector<Finding>(const RuleSpec&, const Scan&)>;

struct RuleSpec {
    std::string id;
    int number = 0;  // position in the report, 1-based
    std::string title;
    Severity severity = Severity::Low;
    std::vector<std::string> keywords;  // union of the Match patterns' keywords
    std::vector<Pattern> patterns;
    Logic logic = Logic::PerLine;
    std::string description;
    std::string suggestion;
    CompoundFn compound;  // set iff logic == Compound

    const Pattern& pattern(std::string_view pattern_id) const;
};

/// Everything a rule may look at for one file. Brace structure and contract
/// blocks are computed once and shared by all rules.
class Scan {
public:
    /// Throws UnbalancedBraces.
    Scan(const FormattedSource& fs, const DetectOptions& options);

    const FormattedSource& fs() const noexcept { return fs_; }
    const BlockIndex& blocks() const noexcept { return blocks_; }
    const std::vector<ContractBlock>& contracts() const noexcept { return contracts_; }
    const DetectOptions& options() const noexcept { return options_; }

    /// Prefilter (when enabled) followed by the regex and its accept hook.
    bool test(const Pattern& p, std::size_t index) const;
    bool test(const Pattern& p, std::size_t index, boost::smatch& m) const;

    /// Finding for 0-based formatted line `index`. An empty message means the
    /// rule's description.
    Finding finding(const RuleSpec& rule, std::size_t index, std::string pattern_id,
                    std::string message = {}) const;

private:
    const FormattedSource& fs_;
    const DetectOptions& options_;
    BlockIndex blocks_;
    std::vector<ContractBlock> contracts_;
};

/// True iff `line` contains at least one of `keywords`.
bool keyword_filter(std::string_view line, const std::vector<std::string>& keywords);

/// Findings of a PerLine rule, one per line at most, ascending by line.
std::vector<Finding> match_rule(const RuleSpec& rule, const Scan& scan);
std::vector<Finding> match_rule(const RuleSpec& rule, const FormattedSource& fs,
                                const DetectOptions& options = {});

struct DetectionResult {
    std::string path;
    std::map<std::string, std::size_t> counts;  // every rule id, zero included
    std::vector<Finding> findings;              // catalog order, then line
    double elapsed = 0.0;                       // seconds
    std::size_t total_lines = 0;                // original lines

    std::size_t total() const noexcept { return findings.size(); }
};

/// Seconds on a monotonic scale. Tests pass a fixed function.
using Clock = std::function<double()>;
Clock steady_clock_seconds();

/// Runs every rule over `fs`. Throws UnbalancedBraces.
DetectionResult run_all(const std::vector<RuleSpec>& rules, const FormattedSource& fs,
                        const DetectOptions& options = {}, const Clock& clock = steady_clock_seconds());

}  // namespace solcheck
