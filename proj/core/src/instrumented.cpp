#include "solcheck/instrumented.hpp"

#include <algorithm>

#include "solcheck/blocks.hpp"

namespace solcheck {

const char* to_string(InsertionKind k) noexcept {
    switch (k) {
    case InsertionKind::VaccineA: return "A";
    case InsertionKind::VaccineB: return "B";
    case InsertionKind::VaccineC: return "C";
    case InsertionKind::VaccineD: return "D";
    case InsertionKind::DepositTest: return "deposit_test";
    case InsertionKind::GuardBefore: return "before";
    case InsertionKind::GuardAfter: return "after";
    }
    return "?";
}

InstrumentedSource InstrumentedSource::identity(FormattedSource fs) {
    InstrumentedSource out;
    out.lines = fs.lines;
    out.origin_index.reserve(fs.lines.size());
    for (std::size_t i = 0; i < fs.lines.size(); ++i) out.origin_index.emplace_back(i);
    out.origin = std::move(fs);
    return out;
}

std::vector<std::string> InstrumentedSource::strip_insertions() const {
    std::vector<bool> inserted(lines.size(), false);
    for (const auto& ins : insertions) {
        if (ins.output_line >= 1 && ins.output_line <= lines.size()) inserted[ins.output_line - 1] = true;
    }
    std::vector<std::string> out;
    out.reserve(lines.size() - insertions.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (!inserted[i]) out.push_back(lines[i]);
    }
    return out;
}

std::string InstrumentedSource::text() const {
    std::string out;
    for (const auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

std::string InstrumentedSource::indented_text() const {
    std::string out;
    int depth = 0;
    for (const auto& l : lines) {
        const BraceCount b = count_braces(l);
        const int indent = std::max(0, depth - (!l.empty() && l.front() == '}' ? 1 : 0));
        out.append(static_cast<std::size_t>(indent) * 4, ' ');
        out += l;
        out += '\n';
        depth = std::max(0, depth + b.open - b.close);
    }
    return out;
}

FormattedSource InstrumentedSource::as_formatted() const {
    FormattedSource fs;
    fs.origin = origin.origin;
    fs.original_line_count = origin.original_line_count;
    fs.lines = lines;
    fs.line_map.reserve(lines.size());

    std::size_t last = 1;
    std::vector<std::size_t> anchor_of(lines.size(), 0);
    for (const auto& ins : insertions) anchor_of.at(ins.output_line - 1) = ins.anchor_line;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::size_t mapped;
        if (origin_index[i]) {
            mapped = origin.line_map.at(*origin_index[i]);
        } else {
            std::size_t anchor = anchor_of[i];
            mapped = anchor >= 1 && anchor <= origin.line_map.size() ? origin.line_map[anchor - 1] : last;
        }
        // Keep the map non-decreasing: an inserted line never maps before its predecessor.
        mapped = std::max(mapped, last);
        fs.line_map.push_back(mapped);
        last = mapped;
    }
    return fs;
}

InstrumentedSource compose(const InstrumentedSource& first, const InstrumentedSource& second) {
    InstrumentedSource out;
    out.origin = first.origin;
    out.lines = second.lines;
    out.notices = first.notices;
    out.notices.insert(out.notices.end(), second.notices.begin(), second.notices.end());

    std::map<std::size_t, const Insertion*> first_at;
    for (const auto& ins : first.insertions) first_at[ins.output_line] = &ins;
    std::map<std::size_t, const Insertion*> second_at;
    for (const auto& ins : second.insertions) second_at[ins.output_line] = &ins;

    // 1-based line of `first` -> 1-based origin line it is, or is anchored to.
    auto origin_anchor = [&](std::size_t line) -> std::size_t {
        if (line == 0 || line > first.origin_index.size()) return 0;
        if (const auto& o = first.origin_index[line - 1]) return *o + 1;
        auto it = first_at.find(line);
        return it == first_at.end() ? 0 : it->second->anchor_line;
    };

    for (std::size_t i = 0; i < second.lines.size(); ++i) {
        const auto& k = second.origin_index[i];
        if (k) {
            out.origin_index.push_back(first.origin_index.at(*k));
            if (auto it = first_at.find(*k + 1); it != first_at.end()) {
                Insertion copy = *it->second;
                copy.output_line = i + 1;
                out.insertions.push_back(std::move(copy));
            }
            continue;
        }
        out.origin_index.push_back(std::nullopt);
        if (auto it = second_at.find(i + 1); it != second_at.end()) {
            Insertion copy = *it->second;
            copy.output_line = i + 1;
            copy.anchor_line = origin_anchor(it->second->anchor_line);
            out.insertions.push_back(std::move(copy));
        }
    }
    return out;
}

void InsertionPlan::before(std::size_t origin_index, InsertionKind kind, std::string text) {
    before_[origin_index].push_back({kind, std::move(text)});
}

void InsertionPlan::after(std::size_t origin_index, InsertionKind kind, std::string text) {
    after_[origin_index].push_back({kind, std::move(text)});
}

InstrumentedSource InsertionPlan::apply(const InstrumentedSource& base) const {
    InstrumentedSource out;
    out.origin = base.origin;
    out.notices = base.notices;

    std::map<std::size_t, const Insertion*> old_at;
    for (const auto& ins : base.insertions) old_at[ins.output_line] = &ins;

    auto emit = [&](std::string text, std::optional<std::size_t> origin, const Insertion* record) {
        out.lines.push_back(std::move(text));
        out.origin_index.push_back(origin);
        if (record) {
            Insertion copy = *record;
            copy.output_line = out.lines.size();
            out.insertions.push_back(std::move(copy));
        }
    };
    auto emit_new = [&](const std::vector<Line>& group, std::size_t anchor) {
        for (const auto& l : group) {
            Insertion ins;
            ins.anchor_line = anchor + 1;
            ins.kind = l.kind;
            ins.text = l.text;
            emit(l.text, std::nullopt, &ins);
        }
    };

    for (std::size_t j = 0; j < base.lines.size(); ++j) {
        const auto& origin = base.origin_index[j];
        if (!origin) {
            auto it = old_at.find(j + 1);
            emit(base.lines[j], std::nullopt, it == old_at.end() ? nullptr : it->second);
            continue;
        }
        if (auto b = before_.find(*origin); b != before_.end()) emit_new(b->second, *origin);
        emit(base.lines[j], origin, nullptr);
        if (auto a = after_.find(*origin); a != after_.end()) emit_new(a->second, *origin);
    }
    return out;
}

}  // namespace solcheck
