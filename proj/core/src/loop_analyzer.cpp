#include "solcheck/loop_analyzer.hpp"

#include <algorithm>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/regex.hpp>

#include "solcheck/errors.hpp"

namespace solcheck {

namespace mp = boost::multiprecision;

GasModel GasModel::derived(std::uint64_t expensive_tx_gas, std::uint64_t ave_gas_per_stmt) {
    GasModel gm;
    gm.expensive_tx_gas = expensive_tx_gas;
    gm.ave_gas_per_stmt = ave_gas_per_stmt;
    gm.stmt_limit = derive_stmt_limit(gm);
    gm.overridden = false;
    return gm;
}

GasModel GasModel::with_limit(std::uint64_t stmt_limit) {
    GasModel gm;
    gm.stmt_limit = stmt_limit;
    gm.overridden = true;
    return gm;
}

std::uint64_t derive_stmt_limit(const GasModel& gm) {
    if (gm.ave_gas_per_stmt == 0) throw ZeroAverageGas();
    if (gm.expensive_tx_gas == 0) return 0;
    return (gm.expensive_tx_gas - 1) / gm.ave_gas_per_stmt;
}

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t clamp_u64(const mp::cpp_int& v) {
    if (v <= 0) return 0;
    if (v >= kSaturated) return kSaturated;
    return v.convert_to<std::uint64_t>();
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    return __builtin_add_overflow(a, b, &r) ? kSaturated : r;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    return __builtin_mul_overflow(a, b, &r) ? kSaturated : r;
}

bool ends_with_statement(const std::string& line) { return !line.empty() && line.back() == ';'; }

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::string> split_for_header(const std::string& inside) {
    std::vector<std::string> parts(1);
    int depth = 0;
    char quote = 0;
    for (std::size_t i = 0; i < inside.size(); ++i) {
        char c = inside[i];
        if (quote) {
            parts.back() += c;
            if (c == '\\' && i + 1 < inside.size()) {
                parts.back() += inside[++i];
            } else if (c == quote) {
                quote = 0;
            }
            continue;
        }
        if (c == '"' || c == '\'') quote = c;
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (c == ';' && depth == 0) {
            parts.emplace_back();
            continue;
        }
        parts.back() += c;
    }
    if (parts.size() != 3) return {};
    for (auto& p : parts) p = trim(p);
    return parts;
}

std::string induction_variable(const std::string& init_clause) {
    static const boost::regex init(R"(^\s*(?:[\w$\[\]]+\s+)*([A-Za-z_$][\w$]*)\s*=[^=])");
    boost::smatch m;
    if (boost::regex_search(init_clause, m, init)) return m[1].str();
    return {};
}

std::optional<std::uint64_t> literal_trip_count(const std::string& inside) {
    static const boost::regex init(R"(^(?:[\w$]+\s+)?([A-Za-z_$][\w$]*)\s*=\s*(-?\d+)$)");
    static const boost::regex cond(R"(^([A-Za-z_$][\w$]*)\s*(<=|>=|<|>)\s*(-?\d+)$)");
    static const boost::regex step(
        R"(^(?:(\+\+|--)\s*([A-Za-z_$][\w$]*)|([A-Za-z_$][\w$]*)\s*(\+\+|--)|([A-Za-z_$][\w$]*)\s*(\+=|-=)\s*(\d+))$)");

    auto parts = split_for_header(inside);
    if (parts.empty()) return std::nullopt;
    boost::smatch mi, mc, ms;
    if (!boost::regex_match(parts[0], mi, init) || !boost::regex_match(parts[1], mc, cond) ||
        !boost::regex_match(parts[2], ms, step)) {
        return std::nullopt;
    }
    const std::string var = mi[1].str();
    if (mc[1].str() != var) return std::nullopt;

    mp::cpp_int k;
    std::string step_var;
    if (ms[1].matched) {
        step_var = ms[2].str();
        k = ms[1].str() == "++" ? 1 : -1;
    } else if (ms[3].matched) {
        step_var = ms[3].str();
        k = ms[4].str() == "++" ? 1 : -1;
    } else {
        step_var = ms[5].str();
        k = mp::cpp_int(ms[7].str());
        if (ms[6].str() == "-=") k = -k;
    }
    if (step_var != var) return std::nullopt;

    const mp::cpp_int a(mi[2].str());
    const mp::cpp_int b(mc[3].str());
    const std::string op = mc[2].str();
    auto holds = [&](const mp::cpp_int& x) {
        if (op == "<") return x < b;
        if (op == "<=") return x <= b;
        if (op == ">") return x > b;
        return x >= b;
    };
    if (!holds(a)) return 0;
    const bool upward = op == "<" || op == "<=";
    if (k == 0 || (k > 0) != upward) return std::nullopt;  // never terminates

    const mp::cpp_int stride = k > 0 ? k : mp::cpp_int(-k);
    const mp::cpp_int span = upward ? b - a : a - b;
    mp::cpp_int trips;
    if (op == "<" || op == ">") {
        trips = (span + stride - 1) / stride;
    } else {
        trips = span / stride + 1;
    }
    return clamp_u64(trips);
}

std::vector<LoopSite> find_loops(const FormattedSource& fs) {
    BlockIndex blocks(fs);
    return find_loops(fs, blocks);
}

std::vector<LoopSite> find_loops(const FormattedSource& fs, const BlockIndex& blocks) {
    static const boost::regex header(R"((?:^|[^\w$.])(for|while)\s*\()");
    static const boost::regex do_open(R"((?:^|[^\w$.])do\s*\{$)");

    std::vector<LoopSite> loops;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const std::string& line = fs.lines[i];
        if (line.find("for") == std::string::npos && line.find("while") == std::string::npos) continue;
        const std::string masked = mask_strings(line);
        boost::smatch m;
        if (!boost::regex_search(masked, m, header)) continue;

        LoopSite site;
        site.header_line = i;
        site.kind = m[1].str() == "for" ? LoopKind::For : LoopKind::While;
        const std::size_t open = static_cast<std::size_t>(m.position() + m.length() - 1);
        auto close = matching_paren(line, open);
        if (!close) continue;
        site.condition = line.substr(open + 1, *close - open - 1);
        const std::string rest = trim(line.substr(*close + 1));

        if (site.kind == LoopKind::While && i > 0 && fs.lines[i - 1] == "}" && m.position() == 0) {
            auto opener = blocks.opening_line(i - 1);
            if (opener && boost::regex_search(mask_strings(fs.lines[*opener]), do_open)) {
                site.kind = LoopKind::DoWhile;
                if (*opener + 1 < i - 1) site.body_span = std::make_pair(*opener + 1, i - 2);
            }
        }
        if (site.kind != LoopKind::DoWhile) {
            if (!rest.empty() && rest.back() == '{') {
                auto body_close = blocks.closing_line(i);
                if (!body_close) throw UnbalancedBraces(i + 1);
                if (*body_close > i + 1) site.body_span = std::make_pair(i + 1, *body_close - 1);
            } else if (rest.size() > 1 && rest.back() == ';') {
                site.body_stmt_count = 1;
                site.direct_stmt_count = 1;
            }
        }
        if (site.kind == LoopKind::For) {
            site.literal_trip_count = literal_trip_count(site.condition);
        }
        loops.push_back(std::move(site));
    }

    // Nesting: a loop is a child of the innermost other loop whose body holds its header.
    for (std::size_t c = 0; c < loops.size(); ++c) {
        std::optional<std::size_t> parent;
        for (std::size_t p = 0; p < loops.size(); ++p) {
            if (p == c || !loops[p].contains(loops[c].header_line)) continue;
            if (!parent || loops[*parent].contains(loops[p].header_line)) parent = p;
        }
        if (parent) loops[*parent].nested.push_back(c);
    }

    for (auto& site : loops) {
        if (!site.body_span) continue;
        auto [first, last] = *site.body_span;
        for (std::size_t l = first; l <= last; ++l) {
            if (!ends_with_statement(fs.lines[l])) continue;
            ++site.body_stmt_count;
            bool in_child = false;
            for (std::size_t c : site.nested) {
                const LoopSite& child = loops[c];
                if (child.header_line == l || child.contains(l)) {
                    in_child = true;
                    break;
                }
            }
            if (!in_child) ++site.direct_stmt_count;
        }
    }
    return loops;
}

std::optional<std::uint64_t> max_executed_statements(const std::vector<LoopSite>& loops, std::size_t site) {
    const LoopSite& s = loops.at(site);
    if (!s.literal_trip_count) return std::nullopt;
    std::uint64_t per_trip = s.direct_stmt_count;
    for (std::size_t c : s.nested) {
        auto inner = max_executed_statements(loops, c);
        if (!inner) return std::nullopt;
        per_trip = sat_add(per_trip, *inner);
    }
    return sat_mul(*s.literal_trip_count, per_trip);
}

std::vector<std::string> condition_identifiers(const std::string& condition, const std::string& exempt) {
    static const char* const literal_words[] = {
        "true", "false", "wei", "gwei", "szabo", "finney", "ether",
        "seconds", "minutes", "hours", "days", "weeks", "years",
    };
    std::vector<std::string> out;
    const std::string text = mask_strings(condition);
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (!is_word_char(c)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && is_word_char(text[j])) ++j;
        std::string token = text.substr(i, j - i);
        i = j;
        if (token[0] >= '0' && token[0] <= '9') continue;  // numeric literal
        if (token == exempt) continue;
        if (std::find(std::begin(literal_words), std::end(literal_words), token) != std::end(literal_words)) continue;
        out.push_back(std::move(token));
    }
    return out;
}

std::vector<Finding> detect_costly_loop(const RuleSpec& rule, const Scan& scan) {
    std::vector<Finding> out;
    const auto loops = find_loops(scan.fs(), scan.blocks());
    for (std::size_t i = 0; i < loops.size(); ++i) {
        const LoopSite& site = loops[i];
        const Pattern* shape = nullptr;
        for (const auto& p : rule.patterns) {
            if (p.role == PatternRole::Match && scan.test(p, site.header_line)) {
                shape = &p;
                break;
            }
        }
        if (shape) {
            out.push_back(scan.finding(rule, site.header_line, shape->id));
            continue;
        }
        auto executed = max_executed_statements(loops, i);
        if (executed && *executed > scan.options().gas.stmt_limit) {
            out.push_back(scan.finding(rule, site.header_line, "gas",
                                       "Loop can execute " + std::to_string(*executed) +
                                           " statements, above the limit of " +
                                           std::to_string(scan.options().gas.stmt_limit) + "."));
        }
    }
    return out;
}

}  // namespace solcheck
