#include "config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "solcheck/errors.hpp"

namespace solcheck::cli {

using ojson = nlohmann::ordered_json;

const char* to_string(ReportFormat f) noexcept {
    switch (f) {
    case ReportFormat::Text: return "text";
    case ReportFormat::Machine: return "json";
    case ReportFormat::Both: return "both";
    }
    return "text";
}

ReportFormat parse_report_format(const std::string& s) {
    if (s == "text") return ReportFormat::Text;
    if (s == "json") return ReportFormat::Machine;
    if (s == "both") return ReportFormat::Both;
    throw ParseError("unknown report format '" + s + "' (expected text, json or both)");
}

std::string serialize(const Config& c) {
    ojson j;
    j["gas"]["expensive_tx_gas"] = c.gas.expensive_tx_gas;
    j["gas"]["ave_gas_per_stmt"] = c.gas.ave_gas_per_stmt;
    j["gas"]["stmt_limit"] = c.gas.stmt_limit;
    j["gas"]["overridden"] = c.gas.overridden;
    j["report_format"] = to_string(c.report_format);
    j["jobs"] = c.jobs;
    return j.dump(2) + "\n";
}

Config deserialize(const std::string& text) {
    Config c;
    try {
        const ojson j = ojson::parse(text);
        const ojson& g = j.at("gas");
        c.gas.expensive_tx_gas = g.at("expensive_tx_gas").get<std::uint64_t>();
        c.gas.ave_gas_per_stmt = g.at("ave_gas_per_stmt").get<std::uint64_t>();
        c.gas.stmt_limit = g.at("stmt_limit").get<std::uint64_t>();
        c.gas.overridden = g.at("overridden").get<bool>();
        c.report_format = parse_report_format(j.at("report_format").get<std::string>());
        c.jobs = j.at("jobs").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    if (c.jobs == 0) throw ParseError("config: jobs must be at least 1");
    if (!c.gas.overridden && c.gas.stmt_limit != derive_stmt_limit(c.gas)) {
        throw ParseError("config: stmt_limit does not follow from the gas figures");
    }
    return c;
}

std::filesystem::path config_path(const std::optional<std::filesystem::path>& explicit_path,
                                  const std::map<std::string, std::string>& env) {
    if (explicit_path) return *explicit_path;
    auto get = [&](const char* k) -> std::string {
        auto it = env.find(k);
        return it == env.end() ? std::string() : it->second;
    };
    if (auto p = get("SOLIDITYCHECK_CONFIG"); !p.empty()) return p;
    if (auto x = get("XDG_CONFIG_HOME"); !x.empty()) return std::filesystem::path(x) / "soliditycheck" / "config.json";
    if (auto h = get("HOME"); !h.empty()) return std::filesystem::path(h) / ".config" / "soliditycheck" / "config.json";
    return std::filesystem::path("soliditycheck.json");
}

Config load_config(const std::filesystem::path& path) {
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) return Config{};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize(buf.str());
}

void save_config(const std::filesystem::path& path, const Config& c) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write config " + path.string());
    out << serialize(c);
    if (!out) throw IoError("cannot write config " + path.string());
}

}  // namespace solcheck::cli
