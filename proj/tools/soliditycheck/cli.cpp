#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include "config.hpp"
#include "solcheck/detectors.hpp"
#include "solcheck/errors.hpp"
#include "solcheck/formatter.hpp"
#include "solcheck/overflow_guard.hpp"
#include "solcheck/reentrancy_guard.hpp"
#include "solcheck/report.hpp"

extern char** environ;

namespace solcheck::cli {

namespace fs = std::filesystem;

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool is_generated(const std::string& name) {
    return ends_with(name, ".reentrancy_guarded.sol") || ends_with(name, ".overflow_guarded.sol") ||
           ends_with(name, ".guarded.sol");
}

std::string stem_of(const fs::path& p) {
    std::string name = p.filename().string();
    if (ends_with(name, ".sol")) name.resize(name.size() - 4);
    return name;
}

void write_file(const fs::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("cannot write " + path.string());
}

void print_standard(std::ostream& out, const GasModel& gm) {
    out << "Costly loop standard\n";
    out << "    statement limit: " << gm.stmt_limit << "\n";
    out << "    expensive transaction gas: " << gm.expensive_tx_gas << "\n";
    out << "    average gas per statement: " << gm.ave_gas_per_stmt << "\n";
    out << "    limit source: " << (gm.overridden ? "set directly" : "derived from gas figures") << "\n";
}

constexpr const char* kFooter = R"(Commands:
  --help                       this text
  --r <files>                  insert re-entrancy vaccines, write <name>.reentrancy_guarded.sol
  --o <files>                  insert integer-overflow guards, write <name>.overflow_guarded.sol
  --r --o <files>              both, vaccines first, write <name>.guarded.sol
  --d <files>                  run the 18 detection rules, write <name>.report.txt
  --g <limit>                  set the costly-loop statement limit
  --g --gas <tx> --avg <stmt>  derive the limit from gas figures (plain --g restores the defaults)
  --s                          print the current costly-loop standard
  --f <dir>                    detect every .sol file under <dir> and print corpus metrics

Exit status: 0 no findings, 1 findings, 2 usage error, 3 I/O error, 4 analysis error.)";

struct Invocation {
    bool reentrancy = false;
    bool overflow = false;
    bool detect = false;
    bool show = false;
    std::optional<std::string> batch_dir;
    bool set_gas = false;
    std::optional<std::uint64_t> limit;
    std::optional<std::uint64_t> tx_gas;
    std::optional<std::uint64_t> avg_gas;
    std::vector<std::string> files;
    std::optional<std::string> config;
    std::optional<std::string> format;
    std::optional<std::size_t> jobs;
    std::optional<std::string> out_dir;
    std::optional<std::string> annotations;
    bool to_stdout = false;
    bool fixed_time = false;
    bool no_prefilter = false;
};

fs::path report_base(const fs::path& source, const std::optional<std::string>& out_dir, const fs::path& relative) {
    if (!out_dir) return source.parent_path() / stem_of(source);
    return fs::path(*out_dir) / relative.parent_path() / stem_of(source);
}

void write_reports(const DetectionReport& report, ReportFormat format, const fs::path& base) {
    if (format != ReportFormat::Machine) write_file(base.string() + ".report.txt", render_text(report));
    if (format != ReportFormat::Text) write_file(base.string() + ".report.json", render_machine(report));
}

// Every report of the run, separated per file, for --stdout.
std::string shown_reports(const std::vector<DetectionReport>& reports, ReportFormat format) {
    std::string shown;
    if (reports.empty()) return shown;
    if (format != ReportFormat::Machine) shown += render_text(reports);
    if (format != ReportFormat::Text) shown += reports.size() == 1 ? render_machine(reports[0]) : render_machine(reports);
    return shown;
}

int instrument_files(const Invocation& inv, std::ostream& out, std::ostream& err) {
    int code = kClean;
    for (const auto& name : inv.files) {
        const fs::path path(name);
        try {
            const FormattedSource formatted = format_source(read_source(path));
            InstrumentedSource result;
            std::string suffix;
            if (inv.reentrancy && inv.overflow) {
                const InstrumentedSource first = reentrancy_instrument(formatted);
                result = compose(first, overflow_instrument(first.as_formatted()));
                suffix = ".guarded.sol";
            } else if (inv.reentrancy) {
                result = reentrancy_instrument(formatted);
                suffix = ".reentrancy_guarded.sol";
            } else {
                result = overflow_instrument(formatted);
                suffix = ".overflow_guarded.sol";
            }
            const fs::path dir = inv.out_dir ? fs::path(*inv.out_dir) : path.parent_path();
            const fs::path target = dir / (stem_of(path) + suffix);
            write_file(target, result.indented_text());
            out << path.string() << " -> " << target.string() << " (" << result.insertions.size()
                << (result.insertions.size() == 1 ? " line" : " lines") << " inserted)\n";
            for (const auto& ins : result.insertions) {
                out << "    line " << ins.output_line << " [" << to_string(ins.kind) << "]: " << ins.text << "\n";
            }
            for (const auto& n : result.notices) out << "    notice: " << n << "\n";
        } catch (const IoError& e) {
            err << name << ": " << e.what() << "\n";
            code = std::max<int>(code, kIoFailure);
        } catch (const std::exception& e) {
            err << name << ": " << e.what() << "\n";
            if (code != kIoFailure) code = kAnalysisFailure;
        }
    }
    return code;
}

int detect_files(const Invocation& inv, const Config& config, std::ostream& out, std::ostream& err) {
    std::vector<fs::path> files(inv.files.begin(), inv.files.end());
    BatchOptions options;
    options.detect.gas = config.gas;
    options.detect.prefilter = !inv.no_prefilter;
    options.jobs = config.jobs;
    if (inv.fixed_time) options.clock = [] { return 0.0; };

    bool io_failed = false;
    bool failed = false;
    bool findings = false;
    std::vector<DetectionReport> shown;
    for (const auto& outcome : analyze_files(files, options)) {
        if (!outcome.result) {
            err << outcome.path.string() << ": " << outcome.error << "\n";
            if (outcome.exit_code == kIoFailure) io_failed = true;
            failed = true;
            continue;
        }
        DetectionReport report = make_report(*outcome.result);
        if (report.total_problem_count > 0) findings = true;
        if (inv.to_stdout) {
            shown.push_back(std::move(report));
            continue;
        }
        const fs::path base = report_base(outcome.path, inv.out_dir, outcome.path.filename());
        try {
            write_reports(report, config.report_format, base);
            out << outcome.path.string() << ": " << report.total_problem_count << " problem(s), report "
                << base.string() << ".report." << (config.report_format == ReportFormat::Machine ? "json" : "txt")
                << "\n";
        } catch (const IoError& e) {
            err << e.what() << "\n";
            io_failed = true;
        }
    }
    out << shown_reports(shown, config.report_format);
    if (io_failed) return kIoFailure;
    if (failed) return kAnalysisFailure;
    return findings ? kFindings : kClean;
}

int batch(const Invocation& inv, const Config& config, std::ostream& out, std::ostream& err) {
    const fs::path root(*inv.batch_dir);
    std::vector<fs::path> files;
    try {
        files = gather_sources(root);
    } catch (const IoError& e) {
        err << e.what() << "\n";
        return kIoFailure;
    }
    std::vector<Annotation> annotations;
    if (inv.annotations) {
        std::ifstream in(*inv.annotations);
        if (!in) {
            err << "cannot read annotations " << *inv.annotations << "\n";
            return kIoFailure;
        }
        try {
            annotations = parse_annotations(in);
        } catch (const ParseError& e) {
            err << e.what() << "\n";
            return kUsage;
        }
    }

    BatchOptions options;
    options.detect.gas = config.gas;
    options.detect.prefilter = !inv.no_prefilter;
    options.jobs = config.jobs;
    if (inv.fixed_time) options.clock = [] { return 0.0; };

    const auto outcomes = analyze_files(files, options);
    std::vector<DetectionResult> results;
    bool failed = false;
    bool findings = false;
    std::vector<DetectionReport> shown;
    for (const auto& outcome : outcomes) {
        if (!outcome.result) {
            err << outcome.path.string() << ": " << outcome.error << "\n";
            failed = true;
            continue;
        }
        DetectionReport report = make_report(*outcome.result);
        if (report.total_problem_count > 0) findings = true;
        results.push_back(*outcome.result);
        if (inv.to_stdout) {
            shown.push_back(std::move(report));
            continue;
        }
        const fs::path base = report_base(outcome.path, inv.out_dir, outcome.path.lexically_relative(root));
        try {
            write_reports(report, config.report_format, base);
        } catch (const IoError& e) {
            err << e.what() << "\n";
            failed = true;
        }
    }
    out << shown_reports(shown, config.report_format);

    if (results.empty()) {
        out << "No analysable .sol files under " << root.string() << "\n";
    } else {
        double elapsed = 0.0;
        for (const auto& r : results) elapsed += r.elapsed;
        const CorpusMetrics metrics = compute_metrics(results, elapsed, inv.annotations ? &annotations : nullptr);
        const std::string text = render_metrics(metrics, catalog());
        out << text;
        if (inv.out_dir) {
            try {
                write_file(fs::path(*inv.out_dir) / "metrics.txt", text);
            } catch (const IoError& e) {
                err << e.what() << "\n";
                failed = true;
            }
        }
    }
    if (failed) return kAnalysisFailure;
    return findings ? kFindings : kClean;
}

}  // namespace

std::vector<fs::path> gather_sources(const fs::path& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
    std::vector<fs::path> out;
    fs::recursive_directory_iterator it(dir, fs::directory_options::skip_permission_denied, ec);
    if (ec) throw IoError("cannot read directory " + dir.string() + ": " + ec.message());
    for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) throw IoError("cannot read directory " + dir.string() + ": " + ec.message());
        if (!it->is_regular_file(ec)) continue;
        const std::string name = it->path().filename().string();
        if (!ends_with(name, ".sol") || is_generated(name)) continue;
        out.push_back(it->path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
    jobs = std::max<std::size_t>(1, std::min(jobs, n));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

std::vector<FileOutcome> analyze_files(const std::vector<fs::path>& files, const BatchOptions& options) {
    std::vector<FileOutcome> outcomes(files.size());
    std::vector<std::optional<FormattedSource>> formatted(files.size());
    std::vector<InheritanceIndex> indexes(files.size());

    auto fail = [&](std::size_t i, const std::exception& e, int code) {
        outcomes[i].error = e.what();
        outcomes[i].exit_code = code;
        formatted[i].reset();
    };

    parallel_for(files.size(), options.jobs, [&](std::size_t i) {
        outcomes[i].path = files[i];
        try {
            formatted[i] = format_source(read_source(files[i]));
            indexes[i] = index_inheritance(*formatted[i]);
        } catch (const IoError& e) {
            fail(i, e, kIoFailure);
        } catch (const std::exception& e) {
            fail(i, e, kAnalysisFailure);
        }
    });

    InheritanceIndex merged;
    for (std::size_t i = 0; i < files.size(); ++i) {
        if (formatted[i]) merged.merge(indexes[i]);
    }
    DetectOptions detect = options.detect;
    detect.batch = &merged;

    const auto& rules = catalog();
    parallel_for(files.size(), options.jobs, [&](std::size_t i) {
        if (!formatted[i]) return;
        try {
            outcomes[i].result = run_all(rules, *formatted[i], detect, options.clock);
        } catch (const std::exception& e) {
            fail(i, e, kAnalysisFailure);
        }
    });
    return outcomes;
}

std::map<std::string, std::string> process_environment() {
    std::map<std::string, std::string> env;
    for (char** e = environ; e && *e; ++e) {
        std::string kv(*e);
        auto eq = kv.find('=');
        if (eq != std::string::npos) env.emplace(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return env;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::map<std::string, std::string>& env) {
    Invocation inv;
    CLI::App app{"soliditycheck: static checks and preventive rewriting for Solidity sources", "soliditycheck"};
    app.footer(kFooter);
    app.add_flag("--r", inv.reentrancy, "Insert re-entrancy vaccines");
    app.add_flag("--o", inv.overflow, "Insert integer-overflow guards");
    app.add_flag("--d", inv.detect, "Run the detection rules");
    app.add_flag("--s", inv.show, "Print the costly-loop standard");
    app.add_option("--f", inv.batch_dir, "Analyse every .sol file under a directory");
    auto* g = app.add_option("--g", inv.limit, "Set the costly-loop statement limit")->expected(0, 1);
    app.add_option("--gas", inv.tx_gas, "Gas of an expensive transaction (with --g)");
    app.add_option("--avg", inv.avg_gas, "Average gas per loop statement (with --g)");
    app.add_option("--config", inv.config, "Config file");
    app.add_option("--format", inv.format, "Report format: text, json or both");
    app.add_option("--jobs", inv.jobs, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out-dir", inv.out_dir, "Directory for reports and rewritten files");
    app.add_option("--annotations", inv.annotations, "Ground truth for --f: lines of `file rule_id line`");
    app.add_flag("--stdout", inv.to_stdout, "Print reports instead of writing files");
    app.add_flag("--fixed-time", inv.fixed_time, "Report every detection time as zero");
    app.add_flag("--no-prefilter", inv.no_prefilter, "Skip the keyword prefilter");
    app.add_option("files", inv.files, "Solidity source files");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kClean;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << "Run with --help for usage.\n";
        return kUsage;
    }
    inv.set_gas = g->count() > 0;

    if (args.empty()) {
        out << app.help();
        return kUsage;
    }
    auto usage = [&](const std::string& msg) {
        err << msg << "\nRun with --help for usage.\n";
        return kUsage;
    };
    const bool rewrite = inv.reentrancy || inv.overflow;
    const int modes = (rewrite ? 1 : 0) + (inv.detect ? 1 : 0) + (inv.batch_dir ? 1 : 0);
    if (modes > 1) return usage("--r/--o, --d and --f cannot be combined");
    if ((rewrite || inv.detect) && inv.files.empty()) return usage("no input files");
    if (!rewrite && !inv.detect && !inv.files.empty()) return usage("input files need --r, --o or --d");
    if ((inv.tx_gas || inv.avg_gas) && !inv.set_gas) return usage("--gas and --avg go with --g");
    if (inv.set_gas && inv.limit && (inv.tx_gas || inv.avg_gas)) return usage("--g takes either a limit or --gas/--avg");
    if (inv.set_gas && !inv.limit && (inv.tx_gas.has_value() != inv.avg_gas.has_value())) {
        return usage("--gas and --avg must be given together");
    }
    if (inv.annotations && !inv.batch_dir) return usage("--annotations needs --f");
    if (modes == 0 && !inv.set_gas && !inv.show) return usage("nothing to do");

    const fs::path cfg_path = config_path(inv.config ? std::optional<fs::path>(*inv.config) : std::nullopt, env);
    Config config;
    try {
        config = load_config(cfg_path);
    } catch (const std::exception& e) {
        err << cfg_path.string() << ": " << e.what() << "\n";
        return kIoFailure;
    }
    try {
        if (inv.format) config.report_format = parse_report_format(*inv.format);
    } catch (const ParseError& e) {
        return usage(e.what());
    }
    if (inv.jobs) config.jobs = *inv.jobs;

    if (inv.set_gas) {
        Config saved = load_config(cfg_path);
        try {
            if (inv.limit) {
                saved.gas = GasModel::with_limit(*inv.limit);
            } else if (inv.tx_gas) {
                saved.gas = GasModel::derived(*inv.tx_gas, *inv.avg_gas);
            } else {
                saved.gas = GasModel{};
            }
        } catch (const ZeroAverageGas& e) {
            return usage(e.what());
        }
        try {
            save_config(cfg_path, saved);
        } catch (const IoError& e) {
            err << e.what() << "\n";
            return kIoFailure;
        }
        config.gas = saved.gas;
        if (!inv.show) print_standard(out, config.gas);
    }
    if (inv.show) print_standard(out, config.gas);

    if (rewrite) return instrument_files(inv, out, err);
    if (inv.detect) return detect_files(inv, config, out, err);
    if (inv.batch_dir) return batch(inv, config, out, err);
    return kClean;
}

}  // namespace solcheck::cli
