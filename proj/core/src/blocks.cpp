#include "solcheck/blocks.hpp"

#include <cctype>

#include <boost/regex.hpp>

#include "solcheck/errors.hpp"

namespace solcheck {

namespace {

template <typename Fn>
void for_each_code_char(std::string_view line, Fn&& fn) {
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quote) {
            if (c == '\\') {
                ++i;
            } else if (c == quote) {
                quote = 0;
            }
            continue;
        }
        if (c == '"' || c == '\'') {
            quote = c;
            continue;
        }
        fn(i, c);
    }
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> parse_bases(std::string_view rest) {
    std::vector<std::string> bases;
    static const boost::regex is_clause(R"(^\s*is\s+(.*)$)");
    boost::match_results<std::string_view::const_iterator> m;
    if (!boost::regex_search(rest.begin(), rest.end(), m, is_clause)) return bases;
    std::string list = m[1].str();

    int depth = 0;
    std::string item;
    auto push = [&] {
        std::string t = trim(item);
        item.clear();
        // `Base(args)` or `lib.Base`: keep the last identifier before any '('.
        std::size_t paren = t.find('(');
        if (paren != std::string::npos) t = trim(t.substr(0, paren));
        std::size_t dot = t.rfind('.');
        if (dot != std::string::npos) t = t.substr(dot + 1);
        if (!t.empty()) bases.push_back(t);
    };
    for (char c : list) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            push();
            continue;
        }
        item += c;
    }
    push();
    return bases;
}

}  // namespace

BraceCount count_braces(std::string_view line) {
    BraceCount n;
    for_each_code_char(line, [&](std::size_t, char c) {
        if (c == '{') ++n.open;
        if (c == '}') ++n.close;
    });
    return n;
}

std::string mask_strings(std::string_view line) {
    std::string out;
    out.reserve(line.size());
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quote) {
            if (c == '\\') {
                ++i;
            } else if (c == quote) {
                quote = 0;
                out += c;
            }
            continue;
        }
        if (c == '"' || c == '\'') quote = c;
        out += c;
    }
    return out;
}

std::optional<std::size_t> matching_paren(std::string_view text, std::size_t open) {
    if (open >= text.size() || text[open] != '(') return std::nullopt;
    int depth = 0;
    std::optional<std::size_t> result;
    for_each_code_char(text.substr(open), [&](std::size_t i, char c) {
        if (result) return;
        if (c == '(') ++depth;
        if (c == ')' && --depth == 0) result = open + i;
    });
    return result;
}

BlockIndex::BlockIndex(const FormattedSource& fs)
    : depth_(fs.size(), 0), close_of_(fs.size(), -1), open_of_(fs.size(), -1) {
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        depth_[i] = static_cast<int>(stack.size());
        bool first_close = true;
        for_each_code_char(fs.lines[i], [&](std::size_t, char c) {
            if (c == '{') {
                stack.push_back(i);
            } else if (c == '}') {
                if (stack.empty()) throw UnbalancedBraces(i + 1);
                std::size_t open = stack.back();
                stack.pop_back();
                close_of_[open] = static_cast<std::ptrdiff_t>(i);
                if (first_close) {
                    open_of_[i] = static_cast<std::ptrdiff_t>(open);
                    first_close = false;
                }
            }
        });
    }
    if (!stack.empty()) throw UnbalancedBraces(stack.back() + 1);
}

std::optional<std::size_t> BlockIndex::closing_line(std::size_t i) const {
    if (close_of_.at(i) < 0) return std::nullopt;
    return static_cast<std::size_t>(close_of_[i]);
}

std::optional<std::size_t> BlockIndex::opening_line(std::size_t i) const {
    if (open_of_.at(i) < 0) return std::nullopt;
    return static_cast<std::size_t>(open_of_[i]);
}

std::vector<ContractBlock> find_contracts(const FormattedSource& fs, const BlockIndex& blocks) {
    static const boost::regex header(R"(^\s*(?:abstract\s+)?(contract|interface|library)\s+(\w+)(.*)\{\s*$)");
    std::vector<ContractBlock> out;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const std::string& line = fs.lines[i];
        if (line.find("contract") == std::string::npos && line.find("interface") == std::string::npos &&
            line.find("library") == std::string::npos) {
            continue;
        }
        boost::smatch m;
        if (!boost::regex_search(line, m, header)) continue;
        auto close = blocks.closing_line(i);
        if (!close) throw UnbalancedBraces(i + 1);
        ContractBlock c;
        std::string kind = m[1].str();
        c.kind = kind == "interface" ? ContractKind::Interface
               : kind == "library"   ? ContractKind::Library
                                     : ContractKind::Contract;
        c.name = m[2].str();
        std::string rest = m[3].str();
        c.bases = parse_bases(rest);
        c.header = i;
        c.close = *close;
        out.push_back(std::move(c));
    }
    return out;
}

bool FunctionBlock::takes_arguments() const {
    return params.find_first_not_of(" \t") != std::string::npos;
}

std::vector<FunctionBlock> find_functions(const FormattedSource& fs, const BlockIndex& blocks,
                                          const ContractBlock& contract) {
    static const boost::regex header(R"(^\s*(?:function\b\s*(\w*)|(constructor|fallback|receive))\s*\()");
    static const boost::regex visibility(R"(\b(public|external|internal|private)\b)");
    static const boost::regex payable(R"(\bpayable\b)");

    std::vector<FunctionBlock> out;
    const int body_depth = blocks.depth_before(contract.header) + 1;
    for (std::size_t i = contract.header + 1; i < contract.close; ++i) {
        if (blocks.depth_before(i) != body_depth) continue;
        const std::string& line = fs.lines[i];
        boost::smatch m;
        if (!boost::regex_search(line, m, header)) continue;

        FunctionBlock f;
        f.name = m[1].matched ? m[1].str() : m[2].str();
        f.header = i;
        std::size_t open = static_cast<std::size_t>(m.position() + m.length() - 1);
        auto close_paren = matching_paren(line, open);
        std::string tail;
        if (close_paren) {
            f.params = line.substr(open + 1, *close_paren - open - 1);
            tail = mask_strings(std::string_view(line).substr(*close_paren + 1));
        }
        boost::smatch vm;
        if (boost::regex_search(tail, vm, visibility)) {
            std::string v = vm[1].str();
            f.visibility = v == "public"     ? Visibility::Public
                         : v == "external"   ? Visibility::External
                         : v == "internal"   ? Visibility::Internal
                                             : Visibility::Private;
        }
        f.payable = boost::regex_search(tail, payable);
        if (!line.empty() && line.back() == '{') {
            f.close = blocks.closing_line(i);
            if (!f.close) throw UnbalancedBraces(i + 1);
        }
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace solcheck
