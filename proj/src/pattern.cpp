#include "argex/pattern.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace argex {

using nlohmann::json;

bool Slot::matches(const Token& tok) const {
    return std::includes(tok.attributes.begin(), tok.attributes.end(),
                         attributes.begin(), attributes.end());
}

Slot make_slot(std::initializer_list<Attribute> attrs) {
    Slot s;
    s.attributes.assign(attrs);
    std::sort(s.attributes.begin(), s.attributes.end());
    s.attributes.erase(std::unique(s.attributes.begin(), s.attributes.end()),
                       s.attributes.end());
    if (s.attributes.empty()) {
        throw std::invalid_argument("slot needs at least one attribute");
    }
    return s;
}

Pattern make_pattern(std::initializer_list<Slot> slots, int gap_budget) {
    if (slots.size() == 0) throw std::invalid_argument("pattern needs at least one slot");
    if (gap_budget < 0) throw std::invalid_argument("gap budget must be non-negative");
    Pattern p;
    p.slots.assign(slots);
    p.gap_budget = gap_budget;
    return p;
}

std::string encode_pattern(const Pattern& p) {
    std::string out = "[";
    for (size_t i = 0; i < p.slots.size(); ++i) {
        if (i > 0) out += ",";
        const auto& attrs = p.slots[i].attributes;
        if (attrs.size() == 1) {
            out += attribute_string(attrs[0]);
        } else {
            out += "[";
            for (size_t j = 0; j < attrs.size(); ++j) {
                if (j > 0) out += ",";
                out += attribute_string(attrs[j]);
            }
            out += "]";
        }
    }
    out += "]|g=" + std::to_string(p.gap_budget);
    return out;
}

namespace {

// feasible[s][t] = slots s.. can be completed when slot s-1 matched token t.
// -1 unknown, 0 no, 1 yes.
struct SpanSearch {
    const Pattern& p;
    const Document& doc;
    std::vector<std::vector<signed char>> memo;

    SpanSearch(const Pattern& pat, const Document& d)
        : p(pat), doc(d),
          memo(pat.slots.size() + 1,
               std::vector<signed char>(d.tokens.size(), -1)) {}

    bool feasible(size_t slot, int last) {
        if (slot == p.slots.size()) return true;
        signed char& cell = memo[slot][last];
        if (cell != -1) return cell == 1;
        int limit = std::min<int>(static_cast<int>(doc.tokens.size()) - 1,
                                  last + 1 + p.gap_budget);
        bool ok = false;
        for (int j = last + 1; j <= limit; ++j) {
            if (p.slots[slot].matches(doc.tokens[j]) && feasible(slot + 1, j)) {
                ok = true;
                break;
            }
        }
        cell = ok ? 1 : 0;
        return ok;
    }

    // Earliest feasible index per slot, given a feasible start.
    MatchSpan minimal_span(int start) {
        MatchSpan span;
        span.token_indices.push_back(start);
        int last = start;
        for (size_t slot = 1; slot < p.slots.size(); ++slot) {
            int limit = std::min<int>(static_cast<int>(doc.tokens.size()) - 1,
                                      last + 1 + p.gap_budget);
            for (int j = last + 1; j <= limit; ++j) {
                if (p.slots[slot].matches(doc.tokens[j]) && feasible(slot + 1, j)) {
                    span.token_indices.push_back(j);
                    last = j;
                    break;
                }
            }
        }
        return span;
    }
};

} // namespace

std::vector<MatchSpan> find_spans(const Pattern& p, const Document& doc) {
    std::vector<MatchSpan> spans;
    if (doc.tokens.empty()) return spans;
    SpanSearch search(p, doc);
    for (int start = 0; start < static_cast<int>(doc.tokens.size()); ++start) {
        if (p.slots[0].matches(doc.tokens[start]) && search.feasible(1, start)) {
            spans.push_back(search.minimal_span(start));
        }
    }
    return spans;
}

bool matches(const Pattern& p, const Document& doc) {
    if (doc.tokens.empty()) return false;
    SpanSearch search(p, doc);
    for (int start = 0; start < static_cast<int>(doc.tokens.size()); ++start) {
        if (p.slots[0].matches(doc.tokens[start]) && search.feasible(1, start)) {
            return true;
        }
    }
    return false;
}

namespace {

bool slot_subsumes(const Slot& general, const Slot& specific) {
    return std::includes(specific.attributes.begin(), specific.attributes.end(),
                         general.attributes.begin(), general.attributes.end());
}

// Can p2.slots[i..] be mapped into p1.slots[j..], the previous image being
// j-1 one level up? Gap condition between consecutive images j_prev < j:
// worst-case tokens in between is (j-j_prev-1) matched ones plus
// (j-j_prev)*g1 gap fillers, which must fit within g2.
struct SubsumptionSearch {
    const Pattern& p1;
    const Pattern& p2;
    std::vector<std::vector<signed char>> memo; // [i][j_prev+1]

    SubsumptionSearch(const Pattern& a, const Pattern& b)
        : p1(a), p2(b),
          memo(b.slots.size(), std::vector<signed char>(a.slots.size() + 1, -1)) {}

    bool from(size_t i, int j_prev) {
        if (i == p2.slots.size()) return true;
        signed char& cell = memo[i][j_prev + 1];
        if (cell != -1) return cell == 1;
        bool ok = false;
        for (int j = j_prev + 1; j < static_cast<int>(p1.slots.size()); ++j) {
            if (!slot_subsumes(p2.slots[i], p1.slots[j])) continue;
            if (j_prev >= 0) {
                long worst_gap = (j - j_prev - 1) +
                                 static_cast<long>(j - j_prev) * p1.gap_budget;
                if (worst_gap > p2.gap_budget) continue;
            }
            if (from(i + 1, j)) {
                ok = true;
                break;
            }
        }
        cell = ok ? 1 : 0;
        return ok;
    }
};

} // namespace

bool more_specific_or_equal(const Pattern& p1, const Pattern& p2) {
    if (p2.slots.size() > p1.slots.size()) return false;
    SubsumptionSearch search(p1, p2);
    return search.from(0, -1);
}

bool strictly_more_specific(const Pattern& p1, const Pattern& p2) {
    return more_specific_or_equal(p1, p2) && !more_specific_or_equal(p2, p1);
}

namespace {

Pattern pattern_from_json(const json& obj) {
    Pattern p;
    if (!obj.contains("slots") || !obj["slots"].is_array() || obj["slots"].empty()) {
        throw std::runtime_error("pattern needs a non-empty 'slots' array");
    }
    for (const auto& slot_arr : obj["slots"]) {
        Slot slot;
        if (!slot_arr.is_array() || slot_arr.empty()) {
            throw std::runtime_error("pattern slot must be a non-empty array of attributes");
        }
        for (const auto& attr_str : slot_arr) {
            slot.attributes.push_back(parse_attribute(attr_str.get<std::string>()));
        }
        std::sort(slot.attributes.begin(), slot.attributes.end());
        slot.attributes.erase(
            std::unique(slot.attributes.begin(), slot.attributes.end()),
            slot.attributes.end());
        p.slots.push_back(std::move(slot));
    }
    p.gap_budget = obj.at("gaps").get<int>();
    if (p.gap_budget < 0) {
        throw std::runtime_error("pattern 'gaps' must be non-negative");
    }
    return p;
}

json pattern_to_json(const Pattern& p) {
    json slots = json::array();
    for (const auto& slot : p.slots) {
        json attrs = json::array();
        for (const auto& attr : slot.attributes) attrs.push_back(attribute_string(attr));
        slots.push_back(std::move(attrs));
    }
    return json{{"slots", std::move(slots)}, {"gaps", p.gap_budget}};
}

} // namespace

std::vector<Pattern> load_patterns(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open pattern file '" + path + "'");
    json arr = json::parse(in);
    if (!arr.is_array()) throw std::runtime_error(path + ": expected a JSON array of patterns");
    std::vector<Pattern> patterns;
    for (const auto& obj : arr) patterns.push_back(pattern_from_json(obj));
    return patterns;
}

void save_patterns(const std::vector<Pattern>& patterns, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write pattern file '" + path + "'");
    json arr = json::array();
    for (const auto& p : patterns) arr.push_back(pattern_to_json(p));
    out << arr.dump(2) << "\n";
}

Pattern pattern_from_json_text(const std::string& text) {
    return pattern_from_json(json::parse(text));
}

std::string pattern_to_json_text(const Pattern& p) {
    return pattern_to_json(p).dump();
}

} // namespace argex
