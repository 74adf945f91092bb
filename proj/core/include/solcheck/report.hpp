#pragma once

// Detection reports (plain text and JSON) and corpus-level metrics.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "solcheck/rule_engine.hpp"

namespace solcheck {

struct ReportLine {
    std::size_t original_line = 0;
    std::size_t formatted_line = 0;
    std::string pattern_id;
    std::string excerpt;
    std::string message;  // empty when it equals the section description

    friend bool operator==(const ReportLine&, const ReportLine&) = default;
};

struct ReportSection {
    int number = 0;
    std::string rule_id;
    std::string name;
    std::string severity;
    std::vector<ReportLine> lines;
    std::string description;
    std::string suggestion;

    friend bool operator==(const ReportSection&, const ReportSection&) = default;
};

struct DetectionReport {
    std::string file_path;
    std::size_t original_line_count = 0;
    double detection_time = 0.0;  // seconds
    std::size_t total_problem_count = 0;
    std::vector<ReportSection> sections;  // one per catalog rule, in catalog order

    friend bool operator==(const DetectionReport&, const DetectionReport&) = default;
};

DetectionReport make_report(const DetectionResult& result, const std::vector<RuleSpec>& rules);
/// Same, against the shared catalog.
DetectionReport make_report(const DetectionResult& result);

std::string render_text(const DetectionReport& report);
/// Reports in the given order, separated by a rule line.
std::string render_text(const std::vector<DetectionReport>& reports);

/// JSON with a fixed key order; see docs/report-schema.md.
std::string render_machine(const DetectionReport& report);
std::string render_machine(const std::vector<DetectionReport>& reports);
/// Inverse of render_machine for a single report. Throws ParseError.
DetectionReport parse_machine(const std::string& text);

/// One ground-truth problem: `file rule_id line` in the annotation format.
struct Annotation {
    std::string file;
    std::string rule_id;
    std::size_t line = 0;  // original, 1-based

    friend auto operator<=>(const Annotation&, const Annotation&) = default;
};

/// Parses whitespace-separated `file rule_id line` records; `#` starts a
/// comment and blank lines are skipped. Throws ParseError.
std::vector<Annotation> parse_annotations(std::istream& in);

/// Outcome counts against ground truth, under the usual names: `missed` is
/// a real problem with no finding and `false_alarms` a finding with no
/// real problem.
struct Tally {
    std::size_t tp = 0;
    std::size_t missed = 0;
    std::size_t false_alarms = 0;

    /// Builds a tally from counts whose FP and FN labels are swapped
    /// (FP counting misses, FN counting false alarms).
    static Tally from_swapped_labels(std::size_t tp, std::size_t fp, std::size_t fn);

    /// tp / (tp + missed), nullopt when the denominator is zero.
    std::optional<double> recall() const;
    /// tp / (tp + false_alarms), nullopt when the denominator is zero.
    std::optional<double> precision() const;

    Tally& operator+=(const Tally& o);
    friend bool operator==(const Tally&, const Tally&) = default;
};

struct CorpusMetrics {
    std::size_t files = 0;
    std::size_t total_lines = 0;
    double total_elapsed = 0.0;
    std::optional<double> rps;                 // lines per second
    std::map<std::string, double> proportion;  // rule id -> share of files with a finding
    std::map<std::string, Tally> accuracy;     // rule id -> tally; empty without annotations
    std::optional<Tally> overall;              // present with annotations

    friend bool operator==(const CorpusMetrics&, const CorpusMetrics&) = default;
};

/// Lines per second, nullopt when `seconds` is not positive.
std::optional<double> lines_per_second(std::size_t lines, double seconds);

/// Throws EmptyCorpus when `results` is empty.
CorpusMetrics compute_metrics(const std::vector<DetectionResult>& results, double total_elapsed,
                              const std::vector<Annotation>* annotations = nullptr);

/// "97.4%" with one decimal, or "N/A".
std::string format_percent(std::optional<double> ratio);

std::string render_metrics(const CorpusMetrics& metrics, const std::vector<RuleSpec>& rules);

}  // namespace solcheck
