#include "solcheck/rule_engine.hpp"

#include <algorithm>
#include <stdexcept>

#include "solcheck/errors.hpp"

namespace solcheck {

const char* to_string(Severity s) noexcept {
    switch (s) {
    case Severity::High: return "High";
    case Severity::Medium: return "Medium";
    case Severity::Low: return "Low";
    }
    return "Low";
}

void Pattern::compile(const std::string& rule_id) {
    try {
        re.assign(source, boost::regex::perl);
    } catch (const boost::regex_error& e) {
        throw PatternCompileError(rule_id, id, e.what());
    }
}

const Pattern& RuleSpec::pattern(std::string_view pattern_id) const {
    for (const auto& p : patterns) {
        if (p.id == pattern_id) return p;
    }
    throw std::out_of_range("rule " + id + " has no pattern " + std::string(pattern_id));
}

void InheritanceIndex::merge(const InheritanceIndex& other) {
    for (const auto& [name, b] : other.bases) {
        auto& mine = bases[name];
        for (const auto& base : b) {
            if (std::find(mine.begin(), mine.end(), base) == mine.end()) mine.push_back(base);
        }
    }
    roots.insert(other.roots.begin(), other.roots.end());
}

bool keyword_filter(std::string_view line, const std::vector<std::string>& keywords) {
    for (const auto& k : keywords) {
        if (line.find(k) != std::string_view::npos) return true;
    }
    return false;
}

Scan::Scan(const FormattedSource& fs, const DetectOptions& options)
    : fs_(fs), options_(options), blocks_(fs), contracts_(find_contracts(fs, blocks_)) {}

bool Scan::test(const Pattern& p, std::size_t index) const {
    boost::smatch m;
    return test(p, index, m);
}

bool Scan::test(const Pattern& p, std::size_t index, boost::smatch& m) const {
    const std::string& line = fs_.lines[index];
    if (options_.prefilter && !p.keywords.empty() && !keyword_filter(line, p.keywords)) return false;
    if (!boost::regex_search(line, m, p.re)) return false;
    return !p.accept || p.accept(m);
}

Finding Scan::finding(const RuleSpec& rule, std::size_t index, std::string pattern_id, std::string message) const {
    Finding f;
    f.rule_id = rule.id;
    f.pattern_id = std::move(pattern_id);
    f.formatted_line = index + 1;
    f.original_line = fs_.line_map.at(index);
    f.excerpt = fs_.lines.at(index);
    f.message = message.empty() ? rule.description : std::move(message);
    f.suggestion = rule.suggestion;
    f.severity = rule.severity;
    return f;
}

std::vector<Finding> match_rule(const RuleSpec& rule, const Scan& scan) {
    if (rule.logic != Logic::PerLine) throw std::invalid_argument("match_rule: " + rule.id + " is not a per-line rule");
    std::vector<Finding> out;
    const auto& lines = scan.fs().lines;
    const bool prefilter = scan.options().prefilter;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (prefilter && !keyword_filter(lines[i], rule.keywords)) continue;
        const Pattern* hit = nullptr;
        for (const auto& p : rule.patterns) {
            if (p.role == PatternRole::Match && scan.test(p, i)) {
                hit = &p;
                break;
            }
        }
        if (!hit) continue;
        bool vetoed = false;
        for (const auto& p : rule.patterns) {
            if (p.role == PatternRole::Exclude && scan.test(p, i)) {
                vetoed = true;
                break;
            }
        }
        if (!vetoed) out.push_back(scan.finding(rule, i, hit->id));
    }
    return out;
}

std::vector<Finding> match_rule(const RuleSpec& rule, const FormattedSource& fs, const DetectOptions& options) {
    Scan scan(fs, options);
    return match_rule(rule, scan);
}

Clock steady_clock_seconds() {
    return [] {
        using namespace std::chrono;
        return duration<double>(steady_clock::now().time_since_epoch()).count();
    };
}

DetectionResult run_all(const std::vector<RuleSpec>& rules, const FormattedSource& fs, const DetectOptions& options,
                        const Clock& clock) {
    const double start = clock();
    DetectionResult result;
    result.path = fs.origin;
    result.total_lines = fs.original_line_count;

    Scan scan(fs, options);
    for (const auto& rule : rules) {
        std::vector<Finding> found =
            rule.logic == Logic::PerLine ? match_rule(rule, scan) : rule.compound(rule, scan);
        std::stable_sort(found.begin(), found.end(),
                         [](const Finding& a, const Finding& b) { return a.formatted_line < b.formatted_line; });
        result.counts[rule.id] = found.size();
        result.findings.insert(result.findings.end(), std::make_move_iterator(found.begin()),
                               std::make_move_iterator(found.end()));
    }
    result.elapsed = clock() - start;
    return result;
}

}  // namespace solcheck
