#include "solcheck/report.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "solcheck/detectors.hpp"
#include "solcheck/errors.hpp"

namespace solcheck {

namespace {

using ojson = nlohmann::ordered_json;

constexpr const char* kSchema = "soliditycheck.report/1";

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

ojson to_json(const DetectionReport& r) {
    ojson sections = ojson::array();
    for (const auto& s : r.sections) {
        ojson lines = ojson::array();
        for (const auto& l : s.lines) {
            ojson jl;
            jl["original_line"] = l.original_line;
            jl["formatted_line"] = l.formatted_line;
            jl["pattern"] = l.pattern_id;
            jl["excerpt"] = l.excerpt;
            jl["message"] = l.message;
            lines.push_back(std::move(jl));
        }
        ojson js;
        js["number"] = s.number;
        js["rule_id"] = s.rule_id;
        js["name"] = s.name;
        js["severity"] = s.severity;
        js["count"] = s.lines.size();
        js["lines"] = std::move(lines);
        js["description"] = s.description;
        js["suggestion"] = s.suggestion;
        sections.push_back(std::move(js));
    }
    ojson j;
    j["schema"] = kSchema;
    j["file"] = r.file_path;
    j["original_lines"] = r.original_line_count;
    j["detection_time"] = r.detection_time;
    j["total"] = r.total_problem_count;
    j["sections"] = std::move(sections);
    return j;
}

template <typename T>
T field(const ojson& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("report: missing key '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("report: bad value for '") + key + "': " + e.what());
    }
}

}  // namespace

DetectionReport make_report(const DetectionResult& result, const std::vector<RuleSpec>& rules) {
    DetectionReport r;
    r.file_path = result.path;
    r.original_line_count = result.total_lines;
    r.detection_time = result.elapsed;
    r.total_problem_count = result.findings.size();
    for (const auto& rule : rules) {
        ReportSection s;
        s.number = rule.number;
        s.rule_id = rule.id;
        s.name = rule.title;
        s.severity = to_string(rule.severity);
        s.description = rule.description;
        s.suggestion = rule.suggestion;
        for (const auto& f : result.findings) {
            if (f.rule_id != rule.id) continue;
            ReportLine l;
            l.original_line = f.original_line;
            l.formatted_line = f.formatted_line;
            l.pattern_id = f.pattern_id;
            l.excerpt = f.excerpt;
            if (f.message != rule.description) l.message = f.message;
            s.lines.push_back(std::move(l));
        }
        r.sections.push_back(std::move(s));
    }
    return r;
}

DetectionReport make_report(const DetectionResult& result) { return make_report(result, catalog()); }

std::string render_text(const DetectionReport& r) {
    std::ostringstream out;
    out << "Detect Report\n";
    out << "    Reporting information\n";
    out << "        Smart contract file path: " << r.file_path << "\n";
    out << "        Number of lines of original contract code: " << r.original_line_count << "\n";
    out << "        Detection time: " << fixed(r.detection_time, 6) << " s\n";
    out << "        Total number of problematic statements: " << r.total_problem_count << "\n";
    for (const auto& s : r.sections) {
        out << "    Details of the problem\n";
        out << "        Problem number: " << s.number << "\n";
        out << "        Problem name: " << s.name << " [" << s.rule_id << ", " << s.severity << "]\n";
        out << "        Problem code line number:";
        if (s.lines.empty()) {
            out << " none\n";
        } else {
            for (std::size_t i = 0; i < s.lines.size(); ++i) out << (i ? ", " : " ") << s.lines[i].original_line;
            out << "\n";
            for (const auto& l : s.lines) {
                out << "            line " << l.original_line << " (" << l.pattern_id << "): " << l.excerpt << "\n";
                if (!l.message.empty()) out << "                " << l.message << "\n";
            }
        }
        out << "        Problem description: " << s.description << "\n";
        out << "        Suggested modifications: " << s.suggestion << "\n";
    }
    return out.str();
}

std::string render_text(const std::vector<DetectionReport>& reports) {
    const std::string rule(72, '=');
    std::string out;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (i) out += rule + "\n";
        out += render_text(reports[i]);
    }
    return out;
}

std::string render_machine(const DetectionReport& report) { return to_json(report).dump(2) + "\n"; }

std::string render_machine(const std::vector<DetectionReport>& reports) {
    ojson arr = ojson::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    return arr.dump(2) + "\n";
}

DetectionReport parse_machine(const std::string& text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("report: ") + e.what());
    }
    if (field<std::string>(j, "schema") != kSchema) throw ParseError("report: unknown schema");
    DetectionReport r;
    r.file_path = field<std::string>(j, "file");
    r.original_line_count = field<std::size_t>(j, "original_lines");
    r.detection_time = field<double>(j, "detection_time");
    r.total_problem_count = field<std::size_t>(j, "total");
    const ojson& sections = j.at("sections");
    if (!sections.is_array()) throw ParseError("report: 'sections' is not an array");
    std::size_t sum = 0;
    for (const auto& js : sections) {
        ReportSection s;
        s.number = field<int>(js, "number");
        s.rule_id = field<std::string>(js, "rule_id");
        s.name = field<std::string>(js, "name");
        s.severity = field<std::string>(js, "severity");
        s.description = field<std::string>(js, "description");
        s.suggestion = field<std::string>(js, "suggestion");
        const ojson& lines = js.at("lines");
        if (!lines.is_array()) throw ParseError("report: 'lines' is not an array");
        for (const auto& jl : lines) {
            ReportLine l;
            l.original_line = field<std::size_t>(jl, "original_line");
            l.formatted_line = field<std::size_t>(jl, "formatted_line");
            l.pattern_id = field<std::string>(jl, "pattern");
            l.excerpt = field<std::string>(jl, "excerpt");
            l.message = field<std::string>(jl, "message");
            s.lines.push_back(std::move(l));
        }
        if (field<std::size_t>(js, "count") != s.lines.size()) {
            throw ParseError("report: count of " + s.rule_id + " disagrees with its lines");
        }
        sum += s.lines.size();
        r.sections.push_back(std::move(s));
    }
    if (sum != r.total_problem_count) throw ParseError("report: total disagrees with the sections");
    return r;
}

std::vector<Annotation> parse_annotations(std::istream& in) {
    std::vector<Annotation> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        Annotation a;
        std::string number;
        if (!(fields >> a.file)) continue;
        std::string extra;
        if (!(fields >> a.rule_id >> number) || (fields >> extra)) {
            throw ParseError("annotations line " + std::to_string(n) + ": expected `file rule_id line`");
        }
        const auto& rules = catalog();
        if (std::none_of(rules.begin(), rules.end(), [&](const RuleSpec& r) { return r.id == a.rule_id; })) {
            throw ParseError("annotations line " + std::to_string(n) + ": unknown rule id '" + a.rule_id + "'");
        }
        try {
            std::size_t used = 0;
            const unsigned long v = std::stoul(number, &used);
            if (used != number.size() || v == 0) throw std::invalid_argument(number);
            a.line = v;
        } catch (const std::logic_error&) {
            throw ParseError("annotations line " + std::to_string(n) + ": bad line number '" + number + "'");
        }
        out.push_back(std::move(a));
    }
    return out;
}

Tally Tally::from_swapped_labels(std::size_t tp, std::size_t fp, std::size_t fn) {
    Tally t;
    t.tp = tp;
    t.missed = fp;
    t.false_alarms = fn;
    return t;
}

std::optional<double> Tally::recall() const {
    if (tp + missed == 0) return std::nullopt;
    return static_cast<double>(tp) / static_cast<double>(tp + missed);
}

std::optional<double> Tally::precision() const {
    if (tp + false_alarms == 0) return std::nullopt;
    return static_cast<double>(tp) / static_cast<double>(tp + false_alarms);
}

Tally& Tally::operator+=(const Tally& o) {
    tp += o.tp;
    missed += o.missed;
    false_alarms += o.false_alarms;
    return *this;
}

std::optional<double> lines_per_second(std::size_t lines, double seconds) {
    if (!(seconds > 0.0)) return std::nullopt;
    return static_cast<double>(lines) / seconds;
}

namespace {

bool same_file(const std::string& result_path, const std::string& annotated) {
    if (result_path == annotated) return true;
    return result_path.size() > annotated.size() &&
           result_path.compare(result_path.size() - annotated.size(), annotated.size(), annotated) == 0 &&
           result_path[result_path.size() - annotated.size() - 1] == '/';
}

}  // namespace

CorpusMetrics compute_metrics(const std::vector<DetectionResult>& results, double total_elapsed,
                              const std::vector<Annotation>* annotations) {
    if (results.empty()) throw EmptyCorpus();
    CorpusMetrics m;
    m.files = results.size();
    m.total_elapsed = total_elapsed;

    std::map<std::string, std::size_t> files_with;
    for (const auto& r : results) {
        m.total_lines += r.total_lines;
        for (const auto& [rule, count] : r.counts) {
            files_with.try_emplace(rule, 0);
            if (count > 0) ++files_with[rule];
        }
    }
    for (const auto& [rule, n] : files_with) {
        m.proportion[rule] = static_cast<double>(n) / static_cast<double>(results.size());
    }
    m.rps = lines_per_second(m.total_lines, total_elapsed);

    if (annotations) {
        Tally overall;
        for (const auto& [rule, n] : files_with) m.accuracy[rule] = Tally{};
        for (const auto& r : results) {
            std::set<std::pair<std::string, std::size_t>> reported;
            for (const auto& f : r.findings) reported.emplace(f.rule_id, f.original_line);
            std::set<std::pair<std::string, std::size_t>> truth;
            for (const auto& a : *annotations) {
                if (same_file(r.path, a.file)) truth.emplace(a.rule_id, a.line);
            }
            for (const auto& key : reported) {
                Tally& t = m.accuracy[key.first];
                if (truth.count(key)) {
                    ++t.tp;
                } else {
                    ++t.false_alarms;
                }
            }
            for (const auto& key : truth) {
                if (!reported.count(key)) ++m.accuracy[key.first].missed;
            }
        }
        for (const auto& [rule, t] : m.accuracy) overall += t;
        m.overall = overall;
    }
    return m;
}

std::string format_percent(std::optional<double> ratio) {
    if (!ratio) return "N/A";
    return fixed(*ratio * 100.0, 1) + "%";
}

std::string render_metrics(const CorpusMetrics& m, const std::vector<RuleSpec>& rules) {
    std::ostringstream out;
    out << "Corpus metrics\n";
    out << "    Files: " << m.files << "\n";
    out << "    Lines: " << m.total_lines << "\n";
    out << "    Time: " << fixed(m.total_elapsed, 2) << " s\n";
    out << "    Lines per second: " << (m.rps ? fixed(*m.rps, 0) : std::string("N/A")) << "\n";
    out << "    Proportion of files per problem\n";
    for (const auto& rule : rules) {
        auto it = m.proportion.find(rule.id);
        const double p = it == m.proportion.end() ? 0.0 : it->second;
        out << "        " << rule.id << ": " << format_percent(p) << "\n";
    }
    if (m.overall) {
        out << "    Accuracy (tp / missed / false alarms, recall, precision)\n";
        for (const auto& rule : rules) {
            auto it = m.accuracy.find(rule.id);
            if (it == m.accuracy.end()) continue;
            const Tally& t = it->second;
            out << "        " << rule.id << ": " << t.tp << " / " << t.missed << " / " << t.false_alarms << ", "
                << format_percent(t.recall()) << ", " << format_percent(t.precision()) << "\n";
        }
        const Tally& t = *m.overall;
        out << "        all: " << t.tp << " / " << t.missed << " / " << t.false_alarms << ", "
            << format_percent(t.recall()) << ", " << format_percent(t.precision()) << "\n";
    }
    return out.str();
}

}  // namespace solcheck
