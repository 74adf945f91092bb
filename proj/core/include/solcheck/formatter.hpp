#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace solcheck {

/// A source file split into lines. CRLF is folded to LF on ingest.
struct RawSource {
    std::string path;
    std::vector<std::string> lines;
    std::size_t byte_len = 0;
    bool trailing_newline = false;

    /// Joins the lines back into the ingested text.
    std::string text() const;
};

/// One complete statement per line, with each line mapped back to the
/// original line on which the statement begins.
struct FormattedSource {
    std::vector<std::string> lines;
    std::vector<std::size_t> line_map;  // 1-based original line per formatted line
    std::string origin;
    std::size_t original_line_count = 0;

    std::size_t size() const noexcept { return lines.size(); }
    bool empty() const noexcept { return lines.empty(); }
    /// 1-based access.
    const std::string& line(std::size_t formatted_line) const { return lines.at(formatted_line - 1); }
};

RawSource make_source(std::string path, std::string_view text);

/// Throws IoError when the file cannot be read.
RawSource read_source(const std::filesystem::path& path);

/// Blanks every comment, delimiters included, with spaces. Columns and the
/// line count are unchanged; `//` and `/*` inside string literals are kept.
RawSource strip_comments(const RawSource& raw);

/// Collapses the comment-free text into one statement per line. A break is
/// placed after each `;`, `{` and `}` outside string literals, except for the
/// two semicolons of a `for (...)` header. A `}` also starts a new line.
FormattedSource normalize_lines(const RawSource& raw);

/// strip_comments followed by normalize_lines.
FormattedSource format_source(const RawSource& raw);

/// Original line where formatted line `formatted_line` (1-based) begins.
/// Throws std::out_of_range.
std::size_t map_line(const FormattedSource& fs, std::size_t formatted_line);

/// Formatted lines joined by newlines, one trailing newline when non-empty.
std::string render(const FormattedSource& fs);

/// True for characters that may appear in an identifier.
constexpr bool is_word_char(char c) noexcept {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '$';
}

}  // namespace solcheck
