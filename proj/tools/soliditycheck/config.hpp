#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "solcheck/gas_model.hpp"

namespace solcheck::cli {

enum class ReportFormat { Text, Machine, Both };

const char* to_string(ReportFormat f) noexcept;
/// Throws ParseError for anything but text / json / both.
ReportFormat parse_report_format(const std::string& s);

struct Config {
    GasModel gas;
    ReportFormat report_format = ReportFormat::Text;
    std::size_t jobs = 1;

    friend bool operator==(const Config&, const Config&) = default;
};

std::string serialize(const Config& c);
/// Throws ParseError.
Config deserialize(const std::string& text);

/// `explicit_path`, else $SOLIDITYCHECK_CONFIG, else
/// $XDG_CONFIG_HOME/soliditycheck/config.json, else
/// $HOME/.config/soliditycheck/config.json. `env` stands in for the
/// process environment.
std::filesystem::path config_path(const std::optional<std::filesystem::path>& explicit_path,
                                  const std::map<std::string, std::string>& env);

/// Defaults when the file does not exist. Throws IoError, ParseError.
Config load_config(const std::filesystem::path& path);
/// Creates parent directories. Throws IoError.
void save_config(const std::filesystem::path& path, const Config& c);

}  // namespace solcheck::cli
