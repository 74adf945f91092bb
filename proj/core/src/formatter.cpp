#include "solcheck/formatter.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "solcheck/errors.hpp"

namespace solcheck {

std::string RawSource::text() const {
    std::string out;
    out.reserve(byte_len);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i > 0) out += '\n';
        out += lines[i];
    }
    if (trailing_newline) out += '\n';
    return out;
}

RawSource make_source(std::string path, std::string_view text) {
    RawSource raw;
    raw.path = std::move(path);

    std::string current;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') continue;
        if (c == '\n') {
            raw.lines.push_back(std::move(current));
            current.clear();
            continue;
        }
        current += c;
    }
    if (!current.empty()) {
        raw.lines.push_back(std::move(current));
    } else if (!text.empty()) {
        raw.trailing_newline = true;
    }
    raw.byte_len = raw.text().size();
    return raw;
}

RawSource read_source(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path.string());
    return make_source(path.string(), buf.str());
}

RawSource strip_comments(const RawSource& raw) {
    RawSource out = raw;
    bool in_block = false;
    std::size_t block_start = 0;

    for (std::size_t ln = 0; ln < out.lines.size(); ++ln) {
        std::string& s = out.lines[ln];
        char quote = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (in_block) {
                if (s[i] == '*' && i + 1 < s.size() && s[i + 1] == '/') {
                    s[i] = s[i + 1] = ' ';
                    ++i;
                    in_block = false;
                } else {
                    s[i] = ' ';
                }
                continue;
            }
            if (quote) {
                if (s[i] == '\\') {
                    ++i;
                } else if (s[i] == quote) {
                    quote = 0;
                }
                continue;
            }
            if (s[i] == '"' || s[i] == '\'') {
                quote = s[i];
            } else if (s[i] == '/' && i + 1 < s.size() && s[i + 1] == '/') {
                for (std::size_t j = i; j < s.size(); ++j) s[j] = ' ';
                break;
            } else if (s[i] == '/' && i + 1 < s.size() && s[i + 1] == '*') {
                s[i] = s[i + 1] = ' ';
                ++i;
                in_block = true;
                block_start = ln + 1;
            }
        }
    }
    if (in_block) throw UnterminatedBlockComment(block_start);
    return out;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\f' || c == '\v' || c == '\r'; }

// Joining two fragments across a removed line break: no space after an
// opening bracket or comma, none before a closing bracket or separator.
bool needs_join_space(char prev, char next) {
    switch (prev) {
    case '(': case '[': case ',': case '.':
        return false;
    default:
        break;
    }
    switch (next) {
    case ')': case ']': case ',': case ';': case '.':
        return false;
    default:
        return true;
    }
}

class LineBuilder {
public:
    explicit LineBuilder(FormattedSource& out) : out_(out) {}

    void feed_line(std::string_view text, std::size_t original_line) {
        std::size_t b = 0;
        std::size_t e = text.size();
        while (b < e && is_space(text[b])) ++b;
        while (e > b && is_space(text[e - 1])) --e;
        // An unterminated literal cannot continue past a line break.
        quote_ = 0;
        for (std::size_t i = b; i < e; ++i) {
            char c = text[i];
            if (quote_) {
                put(c, original_line);
                if (c == '\\' && i + 1 < e) {
                    put(text[++i], original_line);
                } else if (c == quote_) {
                    quote_ = 0;
                }
                continue;
            }
            if (is_space(c)) {
                if (!cur_.empty()) pending_space_ = true;
                continue;
            }
            if (c == '}') flush();
            put(c, original_line);
            if (c == '"' || c == '\'') {
                quote_ = c;
            } else if (c == '(') {
                open_paren();
            } else if (c == ')') {
                if (for_depth_ > 0 && --for_depth_ == 0) for_semis_ = 0;
            } else if (c == ';') {
                if (for_depth_ > 0 && for_semis_ < 2) {
                    ++for_semis_;
                } else {
                    flush();
                }
            } else if (c == '{' || c == '}') {
                flush();
            }
        }
        if (quote_) {
            flush();
        } else if (!cur_.empty()) {
            pending_break_ = true;
        }
    }

    void finish() { flush(); }

private:
    void put(char c, std::size_t original_line) {
        if (cur_.empty()) {
            origin_ = original_line;
        } else if (pending_break_) {
            if (pending_space_ || needs_join_space(cur_.back(), c)) cur_ += ' ';
        } else if (pending_space_) {
            cur_ += ' ';
        }
        pending_space_ = pending_break_ = false;
        cur_ += c;
    }

    void open_paren() {
        if (for_depth_ > 0) {
            ++for_depth_;
            return;
        }
        // cur_ ends with '('; look for a preceding `for` keyword.
        std::size_t end = cur_.size() - 1;
        while (end > 0 && cur_[end - 1] == ' ') --end;
        if (end >= 3 && cur_.compare(end - 3, 3, "for") == 0 && (end == 3 || !is_word_char(cur_[end - 4]))) {
            for_depth_ = 1;
            for_semis_ = 0;
        }
    }

    void flush() {
        if (!cur_.empty()) {
            out_.lines.push_back(std::move(cur_));
            out_.line_map.push_back(origin_);
        }
        cur_.clear();
        pending_space_ = pending_break_ = false;
        for_depth_ = 0;
        for_semis_ = 0;
    }

    FormattedSource& out_;
    std::string cur_;
    std::size_t origin_ = 0;
    bool pending_space_ = false;
    bool pending_break_ = false;
    char quote_ = 0;
    int for_depth_ = 0;
    int for_semis_ = 0;
};

}  // namespace

FormattedSource normalize_lines(const RawSource& raw) {
    FormattedSource fs;
    fs.origin = raw.path;
    fs.original_line_count = raw.lines.size();
    LineBuilder builder(fs);
    for (std::size_t i = 0; i < raw.lines.size(); ++i) builder.feed_line(raw.lines[i], i + 1);
    builder.finish();
    return fs;
}

FormattedSource format_source(const RawSource& raw) { return normalize_lines(strip_comments(raw)); }

std::size_t map_line(const FormattedSource& fs, std::size_t formatted_line) {
    if (formatted_line == 0 || formatted_line > fs.line_map.size()) {
        throw std::out_of_range("formatted line " + std::to_string(formatted_line) + " out of range 1.." +
                                std::to_string(fs.line_map.size()));
    }
    return fs.line_map[formatted_line - 1];
}

std::string render(const FormattedSource& fs) {
    std::string out;
    for (const auto& l : fs.lines) {
        out += l;
        out += '\n';
    }
    return out;
}

}  // namespace solcheck
