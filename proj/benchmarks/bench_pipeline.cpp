#include <benchmark/benchmark.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "solcheck/detectors.hpp"
#include "solcheck/formatter.hpp"
#include "solcheck/overflow_guard.hpp"
#include "solcheck/reentrancy_guard.hpp"

#ifdef SOLCHECK_HAVE_CLI
#include "cli.hpp"
#endif

namespace {

namespace fs = std::filesystem;
using namespace solcheck;

std::vector<fs::path> fixtures() {
    std::vector<fs::path> out;
    for (const auto& e : fs::recursive_directory_iterator(SOLCHECK_FIXTURE_DIR)) {
        if (e.is_regular_file() && e.path().extension() == ".sol") out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

// All fixtures concatenated `copies` times.
const std::string& corpus_text(int copies) {
    static std::map<int, std::string> cache;
    auto& text = cache[copies];
    if (!text.empty()) return text;
    std::string once;
    for (const auto& p : fixtures()) {
        std::ifstream in(p);
        std::ostringstream buf;
        buf << in.rdbuf();
        once += buf.str() + "\n";
    }
    for (int i = 0; i < copies; ++i) text += once;
    return text;
}

void BM_Format(benchmark::State& state) {
    const auto raw = make_source("bench.sol", corpus_text(static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(format_source(raw));
    state.counters["lines/s"] =
        benchmark::Counter(static_cast<double>(raw.lines.size()), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_Format)->Arg(1)->Arg(16);

void BM_RunAll(benchmark::State& state, bool prefilter) {
    const auto raw = make_source("bench.sol", corpus_text(static_cast<int>(state.range(0))));
    const auto fs = format_source(raw);
    DetectOptions o;
    o.prefilter = prefilter;
    for (auto _ : state) benchmark::DoNotOptimize(run_all(catalog(), fs, o));
    state.counters["lines/s"] =
        benchmark::Counter(static_cast<double>(raw.lines.size()), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK_CAPTURE(BM_RunAll, prefilter, true)->Arg(1)->Arg(16);
BENCHMARK_CAPTURE(BM_RunAll, no_prefilter, false)->Arg(1)->Arg(16);

void BM_Instrument(benchmark::State& state) {
    const auto fs = format_source(make_source("bench.sol", corpus_text(1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(reentrancy_instrument(fs));
        benchmark::DoNotOptimize(overflow_instrument(fs));
    }
}
BENCHMARK(BM_Instrument);

#ifdef SOLCHECK_HAVE_CLI
void BM_Batch(benchmark::State& state) {
    const auto files = fixtures();
    std::size_t lines = 0;
    for (const auto& p : files) lines += read_source(p).lines.size();
    cli::BatchOptions o;
    o.jobs = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(cli::analyze_files(files, o));
    state.counters["lines/s"] = benchmark::Counter(static_cast<double>(lines), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_Batch)->Arg(1)->Arg(4)->UseRealTime();
#endif

}  // namespace

BENCHMARK_MAIN();
