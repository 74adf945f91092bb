#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "solcheck/rule_engine.hpp"

namespace solcheck::cli {

enum ExitCode : int {
    kClean = 0,
    kFindings = 1,
    kUsage = 2,
    kIoFailure = 3,
    kAnalysisFailure = 4,
};

/// Result of analysing one file in a batch: either a result or an error.
struct FileOutcome {
    std::filesystem::path path;
    std::optional<DetectionResult> result;
    std::string error;
    int exit_code = kClean;  // kIoFailure or kAnalysisFailure when `error` is set
};

struct BatchOptions {
    DetectOptions detect;
    std::size_t jobs = 1;
    Clock clock = steady_clock_seconds();
};

/// Every `*.sol` under `dir`, sorted, excluding files this tool writes.
/// Throws IoError.
std::vector<std::filesystem::path> gather_sources(const std::filesystem::path& dir);

/// Formats every file, builds one inheritance index for the whole set,
/// then runs the catalog on each file. Outcomes follow the order of `files`
/// whatever the worker count.
std::vector<FileOutcome> analyze_files(const std::vector<std::filesystem::path>& files, const BatchOptions& options);

/// Runs `fn(i)` for i in [0, n) on up to `jobs` threads.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

/// Snapshot of the process environment.
std::map<std::string, std::string> process_environment();

/// Entry point. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::map<std::string, std::string>& env);

}  // namespace solcheck::cli
