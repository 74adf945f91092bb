#include "solcheck/detectors.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/regex.hpp>

#include "solcheck/blocks.hpp"
#include "solcheck/loop_analyzer.hpp"

namespace solcheck {

namespace {

namespace mp = boost::multiprecision;

using Accept = std::function<bool(const boost::smatch&)>;

Pattern pattern(std::string id, std::string source, std::vector<std::string> keywords,
                PatternRole role = PatternRole::Match, std::optional<std::string> reference_form = std::nullopt,
                Accept accept = {}) {
    Pattern p;
    p.id = std::move(id);
    p.source = std::move(source);
    p.keywords = std::move(keywords);
    p.role = role;
    p.reference_form = std::move(reference_form);
    p.accept = std::move(accept);
    return p;
}

// `var x = N` is flagged only while N fits the inference range below the
// widest integer type: -(2^197) < N < 2^198.
bool var_literal_in_range(const boost::smatch& m) {
    mp::cpp_int value(m[2].str());
    if (m[1].matched) value = -value;
    static const mp::cpp_int upper = mp::cpp_int(1) << 198;
    static const mp::cpp_int lower = -(mp::cpp_int(1) << 197);
    return value < upper && value > lower;
}

bool for_condition_has_identifier(const boost::smatch& m) {
    return !condition_identifiers(m[2].str(), induction_variable(m[1].str())).empty();
}

bool while_condition_has_identifier(const boost::smatch& m) { return !condition_identifiers(m[1].str()).empty(); }

std::vector<Finding> compiler_version_findings(const RuleSpec& rule, const Scan& scan) {
    return detect_compiler_version(rule, scan).findings;
}

RuleSpec make_rule(std::string id, std::string title, Severity severity, Logic logic, std::vector<Pattern> patterns,
                   std::string description, std::string suggestion, CompoundFn compound = {}) {
    RuleSpec r;
    r.id = std::move(id);
    r.title = std::move(title);
    r.severity = severity;
    r.logic = logic;
    r.patterns = std::move(patterns);
    r.description = std::move(description);
    r.suggestion = std::move(suggestion);
    r.compound = std::move(compound);
    for (auto& p : r.patterns) {
        p.compile(r.id);
        if (p.role != PatternRole::Match) continue;
        for (const auto& k : p.keywords) {
            if (std::find(r.keywords.begin(), r.keywords.end(), k) == r.keywords.end()) r.keywords.push_back(k);
        }
    }
    return r;
}

const boost::regex& visibility_word() {
    static const boost::regex re(R"(\b(public|private|internal|external)\b)");
    return re;
}

const ContractBlock* enclosing_contract(const Scan& scan, std::size_t line) {
    for (const auto& c : scan.contracts()) {
        if (c.header <= line && line <= c.close) return &c;
    }
    return nullptr;
}

}  // namespace

std::vector<RuleSpec> load_catalog() {
    using R = PatternRole;
    std::vector<RuleSpec> rules;

    // 2.1
    rules.push_back(make_rule(
        "balance-equality", "Balance equality", Severity::High, Logic::PerLine,
        {pattern("2.1",
                 R"(^\s*(if|while|require)\s*\(.*((this\.balance\s*==\s*\d+\s*ether)|(\d+\s*ether\s*==\s*this\.balance)).*\).*$)",
                 {"this.balance"})},
        "Strict equality test on the contract balance. Ether can be forced into a contract, so the "
        "comparison may never hold.",
        "Compare this.balance with >= or <=, or track received amounts in a state variable."));

    // 2.2 is the checked form; a call site without it is the finding.
    rules.push_back(make_rule(
        "mishandled-exceptions", "Mishandled exceptions", Severity::High, Logic::PerLine,
        {pattern("call-site", R"(\.(send|call|delegatecall|callcode)\s*[.({])", {"send", "call"}),
         pattern("2.2", R"(^\s*(if|require)\s*\(.*[\w()\[\].](send|delegatecall|call|callcode).*\(.*\).*\))",
                 {"if", "require"}, R::Exclude,
                 R"((^(\s)*((if)|(require))(\s)*(\()(.)*((\w)|(\()|(\))|(\[)|(\])|(.))(( send)|(delegatecall)|(call)|(callcode))(.)*(\()(.)*(\))(.)*(\))))")},
        "Return value of a low-level call (send, call, delegatecall or callcode) is not checked.",
        "Wrap the call in require(...) or in an if statement that handles the failure."));

    // 2.3, 2.4
    rules.push_back(make_rule(
        "dos-external-contract", "DoS by external contract", Severity::High, Logic::PerLine,
        {pattern("2.3", R"((if|require)\s*\(.*\.\w+\(.*\).*\))", {"if", "require"}),
         pattern("2.4", R"(for\s*\(.*;.+\.\w+\(.*\).*;.*\))", {"for"})},
        "Control flow depends on a call into another contract, which may revert or be destroyed.",
        "Handle failure of the external call explicitly and review the code of every contract or "
        "library relied upon."));

    // 2.5
    rules.push_back(make_rule(
        "tx-origin-auth", "Using tx.origin for authentication", Severity::High, Logic::PerLine,
        {pattern("2.5", R"(^\s*(require|if)\s*\(.*tx\.origin.*\))", {"tx.origin"}, R::Match,
                 R"(^(\s)*((require)|(if))(\s)*(\()(.)*(tx.origin)(.)*(\)))")},
        "Authorization checks tx.origin. Any contract the owner interacts with can pass this check.",
        "Authorize with msg.sender."));

    // 2.6, 2.7
    rules.push_back(make_rule(
        "missing-constructor", "Missing constructor", Severity::High, Logic::Compound,
        {pattern("2.6", R"(^\s*constructor\s*\()", {"constructor"}),
         pattern("2.7", R"(^\s*function\s*(\w+)\s*\()", {"function"}, R::Aux)},
        "Contract declares no constructor.",
        "Declare initialization code with the constructor keyword.", detect_missing_constructor));

    // 2.8 - 2.11
    rules.push_back(make_rule(
        "locked-money", "Locked money", Severity::High, Logic::Compound,
        {pattern("2.8", R"(^\s*(function(\s|\()|receive\s*\(|fallback\s*\().*\).*\spayable(\s|\{|;))", {"payable"},
                 R::Match, R"((\s)*(function)(\s)(.)+(\))(.)*(\s)(payable)((\s)|(\{)|(;)))"),
         pattern("2.9", R"(\.(transfer|send)\s*\(.+\))", {"transfer", "send"}, R::Aux),
         pattern("2.10", R"(\.call\.\s*(value|gas\(.+\)\.value)\(|\.call\s*\{[^}]*value\s*:)", {"call"}, R::Aux),
         pattern("2.11", R"(\b(delegatecall|staticcall|callvalue|call)\s*\()", {"call"}, R::Aux,
                 R"((\b)((delegatecall)|(staticall)|(callvalue)|(call))(\s)*(\())")},
        "Contract accepts ether but contains no statement that can send it out.",
        "Add a withdrawal path (transfer, send or call) or drop the payable modifier.", detect_locked_money));

    // 2.12
    rules.push_back(make_rule(
        "unsafe-type-inference", "Unsafe type inference", Severity::High, Logic::PerLine,
        {pattern("2.12", R"(\bvar\b\s+\w+\s*=\s*(-\s*)?(\d+)\b)", {"var"}, R::Match,
                 R"((\b)(var)(\b)(\s)+(\w)+(\s)*(=)(\s)*(\d)+(\b))", var_literal_in_range)},
        "var takes the smallest integer type that holds the initial value, which can overflow.",
        "Declare the variable with an explicit type such as uint256."));

    // 2.13
    rules.push_back(make_rule(
        "byte-array", "byte[]", Severity::Medium, Logic::PerLine,
        {pattern("2.13", R"(\s*byte\s*\[\s*\]\s)", {"byte"})},
        "byte[] stores every element in a full word and wastes storage and gas.", "Use bytes instead of byte[]."));

    // 2.14 - 2.19
    rules.push_back(make_rule(
        "costly-loop", "Costly loop", Severity::Medium, Logic::Compound,
        {pattern("2.14", R"(\bfor\s*\(.*;.*\..*;.*\))", {"for"}),
         pattern("2.15", R"(\bwhile\s*\(.*\..*\))", {"while"}),
         pattern("2.16", R"(\bfor\s*\(([^;]*);([^;]*\w[^;]*);(.*)\))", {"for"}, R::Match,
                 R"((\b)(for)(\s)*(\()(.)*(;)(.)*(\w)+(.)*(;)(.)*(\)))", for_condition_has_identifier),
         pattern("2.17", R"(\bwhile\s*\((.*\w.*)\))", {"while"}, R::Match, R"((\b)(while)(\s)*(\()(.)*(\w)+(.)*(\)))",
                 while_condition_has_identifier),
         pattern("2.18", R"(\bfor\s*\(.*;.*\(.*\).*;.*\))", {"for"}),
         pattern("2.19", R"(\bwhile\s*\(.*\(.*\).*\))", {"while"})},
        "Loop condition depends on state, a member or a call, so the number of iterations is unbounded.",
        "Bound the number of iterations or split the work across several transactions.", detect_costly_loop));

    // 2.20
    rules.push_back(make_rule(
        "timestamp-dependence", "Timestamp dependence", Severity::Low, Logic::PerLine,
        {pattern("2.20", R"(\bnow\b|\bblock\.timestamp\b)", {"now", "block.timestamp"}, R::Match,
                 R"((((\b)(now)(\b))|((\b)(block.timestamp)(\b))))")},
        "Logic depends on the block timestamp, which the miner chooses within a tolerance.",
        "Do not use now or block.timestamp as a source of randomness or for decisions a miner could profit from."));

    // 2.21, 2.22
    rules.push_back(make_rule(
        "token-api-violation", "Token API violation", Severity::Low, Logic::Compound,
        {pattern("2.21", R"((contract|interface)\s+\w*[Ee][Rr][Cc](20|721|165)\w*(\s|\{|;))", {"contract", "interface"},
                 R::Aux,
                 R"((\s)*((contract)|(interface))(\s)+(\w)*((ERC)|(ERc) |(eRC)|(eRc)| (ErC)|(Erc)|(erC)|(erc))((20)|(721)|(165))(\w)*((\s)|(\{)|(;)))"),
         pattern("2.22", R"(\s*function\s+\b(transfer|transferFrom|approve|supportsInterface|isApprovedForAll)\b)",
                 {"function"}, R::Match,
                 R"((\s)*(function)(\s)+(\b)((transfer)|(transferFrom)|(arrrove)|(supportsInterface)|(isApprovedFo rAll))(\b))"),
         pattern("exception", R"(\b(require|assert)\s*\(|\bthrow\b|\brevert\s*\()",
                 {"require", "assert", "throw", "revert"}, R::Aux)},
        "Token standard function can throw. Callers expect a boolean result instead.",
        "Return false on failure rather than calling require, assert, revert or throw.",
        detect_token_api_violation));

    // 2.23
    rules.push_back(make_rule(
        "fixed-point-type", "Using fixed point number type", Severity::Low, Logic::PerLine,
        {pattern("2.23", R"(\b(ufixed|fixed)(\d{1,3}x\d{0,2})?\s+\w+)", {"fixed"}, R::Match,
                 R"((\b)((unfixed)(fixed))((\d){1,3}(x)(\d){0,2})?(\s)+(\w)+)")},
        "Fixed point variables can be declared but not assigned to or from.",
        "Use integers with an explicit scale factor."));

    // 2.24, 2.25
    rules.push_back(make_rule(
        "private-modifier", "Private modifier", Severity::Low, Logic::PerLine,
        {pattern("2.24", R"(\bprivate\b)", {"private"}),
         pattern("2.25", R"(\bfunction\b)", {"function"}, R::Exclude, R"((\b)(fcuntion)(\b))")},
        "private does not hide a state variable. Its value can be read from chain storage.",
        "Keep secrets out of contract storage; store a hash or keep the data off chain."));

    // 2.26
    rules.push_back(make_rule(
        "redundant-refusal", "Redundant refusal of payment", Severity::Low, Logic::Compound,
        {pattern("2.26", R"(\bfunction\s*\(\s*\).*\s+payable\s*)", {"payable"}),
         pattern("refusal", R"(\brevert\s*\(|\bthrow\b)", {"revert", "throw"}, R::Aux)},
        "Payable fallback only rejects payment. Without a fallback, plain transfers are already rejected.",
        "Remove the fallback function.", detect_redundant_refusal));

    // 2.27 - 2.29
    rules.push_back(make_rule(
        "compiler-version", "Compiler version problem", Severity::Low, Logic::Compound,
        {pattern("2.27", R"(\s*pragma\s+solidity\s+\^\d+\.\d+\.\d+\s*;)", {"pragma"}, R::Match,
                 R"((\s)*(pragma)(\s)+(solidity)(\s)+(\^)(\d)(\.)(\d)(\.)(\d)(\s)*(;))"),
         pattern("2.28", R"(\s*pragma\s+solidity\s+>=\s*\d+\.\d+\.\d+)", {"pragma"}, R::Match,
                 R"((\s)*(pragma)(\s)+(solidity)(\s)+(\>)(\=)(\d)(\.)(\d)(\.)(\d))"),
         pattern("2.29", R"(\s*pragma\s+experimental\s+)", {"pragma"}, R::Aux)},
        "Compiler version is not pinned.",
        "Pin an exact compiler version or a bounded range such as >=0.5.0 <0.6.0.", compiler_version_findings));

    // 2.30 - 2.32
    rules.push_back(make_rule(
        "style-guide", "Style guide violation", Severity::Low, Logic::Compound,
        {pattern("2.30", R"(\bfunction\s+[^a-z]\w+)", {"function"}),
         pattern("2.31", R"(\s*event\s+[^A-Z]\w+)", {"event"}),
         pattern("2.32", R"(\b\w+\s+\[.*\])", {"["})},
        "Declaration does not follow the naming and layout conventions.",
        "Start function names with a lowercase letter and event names with an uppercase letter, and write "
        "array types without a space before '['.",
        detect_style_guide));

    // 2.33
    rules.push_back(make_rule(
        "integer-division", "Integer division", Severity::Low, Logic::PerLine,
        {pattern("2.33", R"(\d+\s*/\s*\d+)", {"/"})},
        "Integer division rounds down; amounts computed this way lose the remainder.",
        "Multiply before dividing, or keep amounts in the smallest unit."));

    // 2.34 - 2.41
    rules.push_back(make_rule(
        "implicit-visibility", "Implicit visibility level", Severity::Low, Logic::Compound,
        {pattern("2.34", R"(^\s*(uint|int)\d{0,3}\s+\w+)", {"int"}),
         pattern("2.35", R"(^\s*(ufixed|fixed)(\d{1,3}x\d{0,2})?\s+\w+)", {"fixed"}),
         pattern("2.36", R"(^\s*bool\s+\w+)", {"bool"}),
         pattern("2.37", R"(^\s*address\s+\w+)", {"address"}),
         pattern("2.38", R"(^\s*mapping\s*\(\s*\w+\s*=>)", {"mapping"}),
         pattern("2.39", R"(^\s*(bytes\d{0,2}|byte)\s+\w+)", {"byte"}, R::Match,
                 R"(^(\s)*(((bytes){0,2})|(byte))(\s)+(\w)+)"),
         pattern("2.40", R"(^\s*string\s+)", {"string"}),
         pattern("2.41", R"(^\s*\w+\s*\[.*\]\s+)", {"["}, R::Exclude)},
        "State variable has no explicit visibility.", "Declare the variable public, internal or private.",
        detect_implicit_visibility));

    for (std::size_t i = 0; i < rules.size(); ++i) rules[i].number = static_cast<int>(i) + 1;
    return rules;
}

const std::vector<RuleSpec>& catalog() {
    static const std::vector<RuleSpec> rules = load_catalog();
    return rules;
}

const RuleSpec& catalog_rule(std::string_view id) {
    for (const auto& r : catalog()) {
        if (r.id == id) return r;
    }
    throw std::out_of_range("no rule " + std::string(id));
}

std::string SolidityVersion::str() const {
    return std::to_string(major) + "." + std::to_string(minor) + "." + std::to_string(patch);
}

std::vector<Finding> detect_missing_constructor(const RuleSpec& rule, const Scan& scan) {
    const Pattern& keyword_form = rule.pattern("2.6");
    const Pattern& named_form = rule.pattern("2.7");
    std::vector<Finding> out;
    for (const auto& c : scan.contracts()) {
        if (c.kind != ContractKind::Contract) continue;
        bool found = false;
        for (std::size_t i = c.header + 1; i < c.close && !found; ++i) {
            boost::smatch m;
            found = scan.test(keyword_form, i) || (scan.test(named_form, i, m) && m[1].str() == c.name);
        }
        if (!found) out.push_back(scan.finding(rule, c.header, "2.6", "Contract " + c.name + " declares no constructor."));
    }
    return out;
}

std::vector<Finding> detect_locked_money(const RuleSpec& rule, const Scan& scan) {
    static const boost::regex assembly_open(R"((?:^|[^\w$.])assembly\b[^;]*\{$)");
    const Pattern& payable = rule.pattern("2.8");
    const Pattern& transfer = rule.pattern("2.9");
    const Pattern& call_value = rule.pattern("2.10");
    const Pattern& raw_call = rule.pattern("2.11");

    std::vector<Finding> out;
    for (const auto& c : scan.contracts()) {
        if (c.kind != ContractKind::Contract) continue;
        std::vector<bool> in_assembly(c.close - c.header + 1, false);
        for (std::size_t i = c.header + 1; i < c.close; ++i) {
            const std::string& line = scan.fs().lines[i];
            if (line.find("assembly") == std::string::npos) continue;
            if (!boost::regex_search(mask_strings(line), assembly_open)) continue;
            auto end = scan.blocks().closing_line(i);
            for (std::size_t j = i + 1; end && j < *end; ++j) in_assembly[j - c.header] = true;
        }

        bool receives = false;
        bool releases = false;
        for (std::size_t i = c.header + 1; i < c.close; ++i) {
            if (in_assembly[i - c.header]) {
                releases = releases || scan.test(raw_call, i);
            } else {
                receives = receives || scan.test(payable, i);
                releases = releases || scan.test(transfer, i) || scan.test(call_value, i);
            }
            if (receives && releases) break;
        }
        if (receives && !releases) {
            out.push_back(scan.finding(rule, c.header, "2.8",
                                       "Contract " + c.name + " accepts ether but never sends any out."));
        }
    }
    return out;
}

InheritanceIndex index_inheritance(const FormattedSource& fs) {
    BlockIndex blocks(fs);
    const Pattern& erc = catalog_rule("token-api-violation").pattern("2.21");
    InheritanceIndex idx;
    for (const auto& c : find_contracts(fs, blocks)) {
        auto& bases = idx.bases[c.name];
        for (const auto& b : c.bases) {
            if (std::find(bases.begin(), bases.end(), b) == bases.end()) bases.push_back(b);
        }
        if (boost::regex_search(fs.lines[c.header], erc.re)) idx.roots.insert(c.name);
    }
    return idx;
}

std::vector<Finding> detect_token_api_violation(const RuleSpec& rule, const Scan& scan) {
    const Pattern& erc = rule.pattern("2.21");
    const Pattern& api = rule.pattern("2.22");
    const Pattern& exception = rule.pattern("exception");

    InheritanceIndex idx;
    for (const auto& c : scan.contracts()) {
        auto& bases = idx.bases[c.name];
        bases.insert(bases.end(), c.bases.begin(), c.bases.end());
        if (scan.test(erc, c.header)) idx.roots.insert(c.name);
    }
    if (scan.options().batch) idx.merge(*scan.options().batch);

    std::set<std::string> closure = idx.roots;
    for (bool grew = true; grew;) {
        grew = false;
        for (const auto& [name, bases] : idx.bases) {
            if (closure.count(name)) continue;
            for (const auto& b : bases) {
                if (closure.count(b)) {
                    closure.insert(name);
                    grew = true;
                    break;
                }
            }
        }
    }

    std::vector<Finding> out;
    for (const auto& c : scan.contracts()) {
        if (!closure.count(c.name)) continue;
        for (const auto& f : find_functions(scan.fs(), scan.blocks(), c)) {
            if (!f.has_body() || !scan.test(api, f.header)) continue;
            for (std::size_t i = f.header + 1; i < *f.close; ++i) {
                if (scan.test(exception, i)) {
                    out.push_back(scan.finding(rule, f.header, "2.22",
                                               "Function " + f.name + " of token contract " + c.name +
                                                   " can throw instead of returning false."));
                    break;
                }
            }
        }
    }
    return out;
}

std::optional<SolidityVersion> declared_version(const FormattedSource& fs) {
    static const boost::regex pragma(R"(^\s*pragma\s+solidity\b(.*)$)");
    static const boost::regex number(R"((\d+)\.(\d+)(?:\.(\d+))?)");
    for (const auto& line : fs.lines) {
        if (line.find("pragma") == std::string::npos) continue;
        boost::smatch m;
        if (!boost::regex_search(line, m, pragma)) continue;
        const std::string rest = m[1].str();
        std::optional<SolidityVersion> lowest;
        for (boost::sregex_iterator it(rest.begin(), rest.end(), number), end; it != end; ++it) {
            SolidityVersion v;
            v.major = std::stoi((*it)[1].str());
            v.minor = std::stoi((*it)[2].str());
            v.patch = (*it)[3].matched ? std::stoi((*it)[3].str()) : 0;
            if (!lowest || v < *lowest) lowest = v;
        }
        return lowest;
    }
    return std::nullopt;
}

std::vector<Finding> detect_redundant_refusal(const RuleSpec& rule, const Scan& scan) {
    static const SolidityVersion gate{0, 4, 0};
    auto version = declared_version(scan.fs());
    if (version && *version <= gate) return {};

    const Pattern& fallback = rule.pattern("2.26");
    const Pattern& refusal = rule.pattern("refusal");
    std::vector<Finding> out;
    const auto& lines = scan.fs().lines;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty() || lines[i].back() != '{' || !scan.test(fallback, i)) continue;
        auto close = scan.blocks().closing_line(i);
        if (!close) continue;
        for (std::size_t j = i + 1; j < *close; ++j) {
            if (scan.test(refusal, j)) {
                out.push_back(scan.finding(rule, i, "2.26"));
                break;
            }
        }
    }
    return out;
}

CompilerVersionCheck detect_compiler_version(const RuleSpec& rule, const Scan& scan) {
    static const boost::regex solidity_pragma(R"(^\s*pragma\s+solidity\b)");
    const Pattern& caret = rule.pattern("2.27");
    const Pattern& lower_only = rule.pattern("2.28");
    const Pattern& experimental = rule.pattern("2.29");

    CompilerVersionCheck check;
    check.version = declared_version(scan.fs());
    const auto& lines = scan.fs().lines;
    bool has_experimental = false;
    std::optional<std::size_t> first_pragma;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (!first_pragma && lines[i].find("pragma") != std::string::npos &&
            boost::regex_search(lines[i], solidity_pragma)) {
            first_pragma = i;
        }
        if (scan.test(caret, i)) {
            check.findings.push_back(
                scan.finding(rule, i, "2.27", "Caret version pragma admits every later compiler release."));
        } else if (scan.test(lower_only, i) && lines[i].find('<') == std::string::npos) {
            check.findings.push_back(
                scan.finding(rule, i, "2.28", "Version range has a lower bound but no upper bound."));
        }
        has_experimental = has_experimental || scan.test(experimental, i);
    }
    if (!has_experimental && !lines.empty()) {
        check.findings.push_back(scan.finding(rule, first_pragma.value_or(0), "2.29",
                                              "No pragma experimental directive; newer checks are not enabled."));
    }
    std::stable_sort(check.findings.begin(), check.findings.end(),
                     [](const Finding& a, const Finding& b) { return a.formatted_line < b.formatted_line; });
    return check;
}

std::vector<Finding> detect_private_modifier(const RuleSpec& rule, const Scan& scan) { return match_rule(rule, scan); }

std::vector<Finding> detect_style_guide(const RuleSpec& rule, const Scan& scan) {
    static const boost::regex function_name(R"(\bfunction\s+(\w+))");
    const Pattern& fn = rule.pattern("2.30");
    const Pattern& event = rule.pattern("2.31");
    const Pattern& array = rule.pattern("2.32");

    std::vector<Finding> out;
    const auto& lines = scan.fs().lines;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (scan.test(fn, i)) {
            // A function named after its contract is an old-style constructor.
            boost::smatch m;
            const ContractBlock* c = enclosing_contract(scan, i);
            bool constructor = c && boost::regex_search(lines[i], m, function_name) && m[1].str() == c->name;
            if (!constructor) {
                out.push_back(scan.finding(rule, i, "2.30", "Function name does not start with a lowercase letter."));
                continue;
            }
        }
        if (scan.test(event, i)) {
            out.push_back(scan.finding(rule, i, "2.31", "Event name does not start with an uppercase letter."));
        } else if (scan.test(array, i)) {
            out.push_back(scan.finding(rule, i, "2.32", "Space between a type and its array brackets."));
        }
    }
    return out;
}

std::vector<Finding> detect_implicit_visibility(const RuleSpec& rule, const Scan& scan) {
    std::vector<const Pattern*> declarations;
    const Pattern* exclude = nullptr;
    for (const auto& p : rule.patterns) {
        if (p.role == PatternRole::Match) declarations.push_back(&p);
        if (p.role == PatternRole::Exclude) exclude = &p;
    }

    std::vector<Finding> out;
    const auto& lines = scan.fs().lines;
    for (const auto& c : scan.contracts()) {
        const int state_depth = scan.blocks().depth_before(c.header) + 1;
        for (std::size_t i = c.header + 1; i < c.close; ++i) {
            const std::string& line = lines[i];
            if (scan.blocks().depth_before(i) != state_depth || line.empty() || line.back() != ';') continue;
            const Pattern* hit = nullptr;
            for (const Pattern* p : declarations) {
                if (scan.test(*p, i)) {
                    hit = p;
                    break;
                }
            }
            if (!hit || (exclude && scan.test(*exclude, i))) continue;
            if (boost::regex_search(mask_strings(line), visibility_word())) continue;
            out.push_back(scan.finding(rule, i, hit->id));
        }
    }
    return out;
}

std::vector<Finding> detect(std::string_view rule_id, const FormattedSource& fs, const DetectOptions& options) {
    const RuleSpec& rule = catalog_rule(rule_id);
    Scan scan(fs, options);
    auto found = rule.logic == Logic::PerLine ? match_rule(rule, scan) : rule.compound(rule, scan);
    std::stable_sort(found.begin(), found.end(),
                     [](const Finding& a, const Finding& b) { return a.formatted_line < b.formatted_line; });
    return found;
}

}  // namespace solcheck
