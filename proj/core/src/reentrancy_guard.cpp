#include "solcheck/reentrancy_guard.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

#include <boost/regex.hpp>

namespace solcheck {

namespace {

// True when position `pos` of `line` falls inside a string literal.
bool in_string(std::string_view line, std::size_t pos) {
    char quote = 0;
    for (std::size_t i = 0; i < pos && i < line.size(); ++i) {
        char c = line[i];
        if (quote) {
            if (c == '\\') {
                ++i;
            } else if (c == quote) {
                quote = 0;
            }
        } else if (c == '"' || c == '\'') {
            quote = c;
        }
    }
    return quote != 0;
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

// Start of the member-access expression ending just before `end`:
// identifiers, `.`, and balanced `[...]` / `(...)` groups.
std::size_t receiver_start(std::string_view line, std::size_t end) {
    std::size_t i = end;
    while (i > 0) {
        char c = line[i - 1];
        if (is_word_char(c) || c == '.') {
            --i;
            continue;
        }
        if (c == ']' || c == ')') {
            const char open = c == ']' ? '[' : '(';
            int depth = 0;
            std::size_t j = i;
            while (j > 0) {
                char d = line[j - 1];
                if (d == c) ++depth;
                if (d == open && --depth == 0) break;
                --j;
            }
            if (j == 0) break;  // unbalanced
            i = j - 1;
            continue;
        }
        break;
    }
    return i;
}

bool word_present(const FormattedSource& fs, std::size_t first, std::size_t last, const std::string& word) {
    const boost::regex re("(?:^|[^\\w$])" + word + "(?:[^\\w$]|$)");
    for (std::size_t i = first; i <= last && i < fs.size(); ++i) {
        if (fs.lines[i].find(word) != std::string::npos && boost::regex_search(fs.lines[i], re)) return true;
    }
    return false;
}

std::string fresh_name(const FormattedSource& fs, const ContractBlock& c, std::size_t ordinal,
                       const std::string& base) {
    if (!word_present(fs, c.header, c.close, base)) return base;
    std::string name = base + "_" + std::to_string(ordinal);
    for (int k = 2; word_present(fs, c.header, c.close, name); ++k) {
        name = base + "_" + std::to_string(ordinal) + "_" + std::to_string(k);
    }
    return name;
}

struct ContractAnalysis {
    ContractBlock contract;
    std::size_t ordinal = 0;  // 1-based position in the file
    std::optional<LedgerRef> ledger;
    std::vector<FunctionInfo> functions;
    std::vector<DangerousStatement> dangerous;      // inside the contract body
    std::vector<std::size_t> heads;                 // indices into functions
    std::map<std::size_t, std::string> a_receiver;  // function index -> etherReceiver for vaccine A
};

std::optional<std::size_t> enclosing_function(const std::vector<FunctionInfo>& fns, std::size_t line) {
    for (std::size_t i = 0; i < fns.size(); ++i) {
        const auto& span = fns[i].body_span;
        if (span && line >= span->first && line <= span->second) return i;
    }
    return std::nullopt;
}

std::vector<std::vector<std::size_t>> call_graph(const std::vector<FunctionInfo>& fns) {
    std::map<std::string, std::vector<std::size_t>> by_name;
    for (std::size_t i = 0; i < fns.size(); ++i) by_name[fns[i].name].push_back(i);
    std::vector<std::vector<std::size_t>> edges(fns.size());
    for (std::size_t i = 0; i < fns.size(); ++i) {
        for (const auto& callee : fns[i].calls) {
            auto it = by_name.find(callee);
            if (it == by_name.end()) continue;
            for (std::size_t j : it->second) edges[i].push_back(j);  // overloads: every candidate
        }
    }
    return edges;
}

bool can_head(const FunctionInfo& f) { return f.externally_callable && !f.constructor; }

std::vector<ContractAnalysis> analyze(const FormattedSource& fs) {
    BlockIndex blocks(fs);
    const auto all_dangerous = find_dangerous_statements(fs);
    std::vector<ContractAnalysis> out;
    std::size_t ordinal = 0;
    for (const auto& c : find_contracts(fs, blocks)) {
        ++ordinal;
        if (c.kind != ContractKind::Contract) continue;
        ContractAnalysis a;
        a.contract = c;
        a.ordinal = ordinal;
        for (const auto& d : all_dangerous) {
            if (d.formatted_line > c.header && d.formatted_line < c.close &&
                blocks.depth_before(d.formatted_line) > blocks.depth_before(c.header)) {
                a.dangerous.push_back(d);
            }
        }
        if (a.dangerous.empty()) continue;
        a.ledger = locate_ledger(fs, blocks, c);
        a.functions = function_infos(fs, blocks, c);

        std::map<std::size_t, std::string> first_receiver;
        for (const auto& d : a.dangerous) {
            auto f = enclosing_function(a.functions, d.formatted_line);
            if (f) first_receiver.emplace(*f, d.receiver_expr);
        }
        const auto edges = call_graph(a.functions);
        for (std::size_t h = 0; h < a.functions.size(); ++h) {
            const bool direct = a.functions[h].contains_dangerous;
            if (direct) a.a_receiver[h] = first_receiver.at(h);
            if (!can_head(a.functions[h])) continue;
            if (direct) {
                a.heads.push_back(h);
                continue;
            }
            // Breadth-first: the nearest reachable direct function supplies the receiver.
            std::vector<bool> seen(a.functions.size(), false);
            std::deque<std::size_t> queue{h};
            seen[h] = true;
            while (!queue.empty()) {
                std::size_t cur = queue.front();
                queue.pop_front();
                if (a.functions[cur].contains_dangerous) {
                    a.heads.push_back(h);
                    a.a_receiver[h] = first_receiver.at(cur);
                    break;
                }
                for (std::size_t n : edges[cur]) {
                    if (!seen[n]) {
                        seen[n] = true;
                        queue.push_back(n);
                    }
                }
            }
        }
        out.push_back(std::move(a));
    }
    return out;
}

std::string no_ledger_notice(const FormattedSource& fs, const ContractAnalysis& a) {
    return "NoLedger: contract " + a.contract.name + " has a dangerous statement at line " +
           std::to_string(fs.line_map.at(a.dangerous.front().formatted_line)) +
           " but declares no mapping(address => uint) ledger; not instrumented";
}

}  // namespace

std::optional<DangerousStatement> match_dangerous(std::string_view line) {
    static const boost::regex head(R"(\.\s*call\s*\.\s*value\s*\()");
    if (line.find("call") == std::string_view::npos) return std::nullopt;
    const std::string text(line);
    auto begin = boost::sregex_iterator(text.begin(), text.end(), head);
    for (auto it = begin; it != boost::sregex_iterator(); ++it) {
        const auto at = static_cast<std::size_t>(it->position());
        if (in_string(text, at)) continue;
        const std::size_t open = at + static_cast<std::size_t>(it->length()) - 1;
        auto close = matching_paren(text, open);
        if (!close) continue;
        std::string value = trim(std::string_view(text).substr(open + 1, *close - open - 1));
        if (value.empty()) continue;
        std::size_t next = *close + 1;
        while (next < text.size() && text[next] == ' ') ++next;
        if (next >= text.size() || text[next] != '(') continue;
        auto args_close = matching_paren(text, next);
        if (!args_close) continue;
        std::string args = trim(std::string_view(text).substr(next + 1, *args_close - next - 1));
        if (!args.empty() && args != "\"\"" && args != "''") continue;
        const std::size_t start = receiver_start(text, at);
        std::string receiver = text.substr(start, at - start);
        if (receiver.empty()) continue;
        return DangerousStatement{0, std::move(receiver), std::move(value)};
    }
    return std::nullopt;
}

std::vector<DangerousStatement> find_dangerous_statements(const FormattedSource& fs) {
    std::vector<DangerousStatement> out;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        if (auto d = match_dangerous(fs.lines[i])) {
            d->formatted_line = i;
            out.push_back(std::move(*d));
        }
    }
    return out;
}

std::vector<FunctionInfo> function_infos(const FormattedSource& fs, const BlockIndex& blocks,
                                         const ContractBlock& contract) {
    static const boost::regex call_re(R"((?:^|[^\w$.])([A-Za-z_$][\w$]*)\s*\()");
    const auto blocks_fn = find_functions(fs, blocks, contract);
    std::set<std::string> names;
    for (const auto& f : blocks_fn) {
        if (f.has_body() && !f.name.empty()) names.insert(f.name);
    }

    std::vector<FunctionInfo> out;
    for (const auto& f : blocks_fn) {
        if (!f.has_body()) continue;
        FunctionInfo info;
        info.name = f.name;
        info.contract = contract.name;
        info.header_line = f.header;
        if (*f.close > f.header + 1) info.body_span = std::make_pair(f.header + 1, *f.close - 1);
        info.externally_callable = f.externally_callable();
        info.takes_arguments = f.takes_arguments();
        info.constructor = f.name == "constructor" || f.name == contract.name;
        info.unnamed = f.name.empty() || f.name == "fallback" || f.name == "receive";
        if (info.body_span) {
            for (std::size_t l = info.body_span->first; l <= info.body_span->second; ++l) {
                const std::string masked = mask_strings(fs.lines[l]);
                for (auto it = boost::sregex_iterator(masked.begin(), masked.end(), call_re);
                     it != boost::sregex_iterator(); ++it) {
                    std::string callee = (*it)[1].str();
                    if (names.count(callee) &&
                        std::find(info.calls.begin(), info.calls.end(), callee) == info.calls.end()) {
                        info.calls.push_back(std::move(callee));
                    }
                }
                if (!info.contains_dangerous && match_dangerous(fs.lines[l])) info.contains_dangerous = true;
            }
        }
        out.push_back(std::move(info));
    }
    return out;
}

std::vector<CallChain> build_call_chains(const std::vector<FunctionInfo>& functions) {
    std::vector<CallChain> out;
    const auto edges = call_graph(functions);
    std::vector<std::size_t> path;
    std::vector<bool> on_path(functions.size(), false);

    std::function<void(std::size_t)> walk = [&](std::size_t cur) {
        if (out.size() >= kMaxChainsPerContract) return;
        path.push_back(cur);
        on_path[cur] = true;
        if (functions[cur].contains_dangerous) {
            CallChain chain;
            chain.contract = functions[cur].contract;
            for (std::size_t p : path) chain.functions.push_back(functions[p].name);
            out.push_back(std::move(chain));
        }
        for (std::size_t n : edges[cur]) {
            if (!on_path[n]) walk(n);
        }
        on_path[cur] = false;
        path.pop_back();
    };
    for (std::size_t h = 0; h < functions.size(); ++h) {
        if (can_head(functions[h])) walk(h);
    }
    return out;
}

std::vector<CallChain> build_call_chains(const FormattedSource& fs) {
    BlockIndex blocks(fs);
    std::vector<CallChain> out;
    for (const auto& c : find_contracts(fs, blocks)) {
        if (c.kind != ContractKind::Contract) continue;
        auto chains = build_call_chains(function_infos(fs, blocks, c));
        out.insert(out.end(), std::make_move_iterator(chains.begin()), std::make_move_iterator(chains.end()));
    }
    return out;
}

std::optional<LedgerRef> locate_ledger(const FormattedSource& fs, const BlockIndex& blocks,
                                       const ContractBlock& contract) {
    static const boost::regex decl(
        R"(^mapping\s*\(\s*address\s*=>\s*(?:uint|uint256)\s*\)\s*(?:(?:public|private|internal|constant|immutable)\s+)*([A-Za-z_$][\w$]*)\s*;$)");
    const int state_depth = blocks.depth_before(contract.header) + 1;
    for (std::size_t i = contract.header + 1; i < contract.close; ++i) {
        if (blocks.depth_before(i) != state_depth) continue;
        boost::smatch m;
        if (boost::regex_match(fs.lines[i], m, decl)) return LedgerRef{i, m[1].str()};
    }
    return std::nullopt;
}

std::optional<LedgerRef> locate_ledger(const FormattedSource& fs) {
    BlockIndex blocks(fs);
    for (const auto& c : find_contracts(fs, blocks)) {
        if (c.kind != ContractKind::Contract) continue;
        if (auto l = locate_ledger(fs, blocks, c)) return l;
    }
    return std::nullopt;
}

InstrumentedSource insert_vaccines(const FormattedSource& fs) {
    InstrumentedSource base = InstrumentedSource::identity(fs);
    const auto analyses = analyze(fs);
    if (find_dangerous_statements(fs).empty()) {
        base.notices.push_back("NoDangerousStatement: no call.value statement found; source unchanged");
        return base;
    }

    InsertionPlan plan;
    for (const auto& a : analyses) {
        if (!a.ledger) {
            base.notices.push_back(no_ledger_notice(fs, a));
            continue;
        }
        const std::string aexe = fresh_name(fs, a.contract, a.ordinal, "Aexe");
        const std::string bexe = fresh_name(fs, a.contract, a.ordinal, "Bexe");
        const std::string& ledger = a.ledger->variable_name;

        plan.after(a.contract.header, InsertionKind::VaccineD, "uint256 public " + aexe + "=0;");
        plan.after(a.contract.header, InsertionKind::VaccineD, "uint256 public " + bexe + "=0;");

        for (const auto& [f, receiver] : a.a_receiver) {
            const bool head = std::find(a.heads.begin(), a.heads.end(), f) != a.heads.end();
            if (!head && !a.functions[f].contains_dangerous) continue;
            const std::size_t h = a.functions[f].header_line;
            plan.after(h, InsertionKind::VaccineA, "if(" + bexe + "==0){");
            plan.after(h, InsertionKind::VaccineA, bexe + "=" + ledger + "[" + receiver + "];");
            plan.after(h, InsertionKind::VaccineA, "}");
        }
        for (const auto& d : a.dangerous) {
            plan.before(d.formatted_line, InsertionKind::VaccineB, aexe + "=" + ledger + "[" + d.receiver_expr + "];");
            plan.before(d.formatted_line, InsertionKind::VaccineB, "require(" + aexe + "<" + bexe + ");");
            plan.after(d.formatted_line, InsertionKind::VaccineC, aexe + "=0;");
            plan.after(d.formatted_line, InsertionKind::VaccineC, bexe + "=0;");
        }
    }
    return plan.apply(base);
}

InstrumentedSource insert_deposit_test(const InstrumentedSource& is) {
    const FormattedSource& fs = is.origin;
    InsertionPlan plan;
    for (const auto& a : analyze(fs)) {
        if (!a.ledger) continue;
        const std::string name = fresh_name(fs, a.contract, a.ordinal, "deposit_test");
        std::vector<std::string> lines;
        lines.push_back("function " + name + "() public payable{");
        lines.push_back(a.ledger->variable_name + "[msg.sender]+=msg.value;");
        std::vector<std::string> skipped;
        for (std::size_t f = 0; f < a.functions.size(); ++f) {
            const auto& fn = a.functions[f];
            const bool head = std::find(a.heads.begin(), a.heads.end(), f) != a.heads.end();
            if (!head && !fn.contains_dangerous) continue;
            if (fn.constructor || fn.unnamed) continue;
            if (fn.takes_arguments) {
                skipped.push_back(fn.name);
                continue;
            }
            lines.push_back(fn.name + "();");
        }
        if (!skipped.empty()) {
            std::string note = "// not called, parameters required:";
            for (const auto& s : skipped) note += " " + s;
            lines.push_back(note);
        }
        lines.push_back("}");
        for (auto& l : lines) plan.before(a.contract.close, InsertionKind::DepositTest, std::move(l));
    }
    if (plan.empty()) return is;
    return plan.apply(is);
}

InstrumentedSource reentrancy_instrument(const FormattedSource& fs) {
    return insert_deposit_test(insert_vaccines(fs));
}

}  // namespace solcheck
