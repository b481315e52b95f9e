#pragma once

#include "argex/corpus.hpp"

#include <string>
#include <vector>

namespace argex {

/// One pattern position: a token matches iff it carries every attribute here.
struct Slot {
    std::vector<Attribute> attributes; // sorted, unique, non-empty

    bool matches(const Token& tok) const;
    auto operator<=>(const Slot&) const = default;
};

/// Ordered slots with a gap budget: at most gap_budget non-matching tokens
/// are allowed between consecutive matched tokens.
struct Pattern {
    std::vector<Slot> slots; // non-empty
    int gap_budget = 0;

    auto operator<=>(const Pattern&) const = default;
};

Slot make_slot(std::initializer_list<Attribute> attrs);
Pattern make_pattern(std::initializer_list<Slot> slots, int gap_budget);

/// Canonical encoding used for dedup, tie-breaking and display, e.g.
/// "[TEXT:nothing,SENTIMENT:pos]|g=2". Top-level commas separate slots;
/// a multi-attribute slot renders as a nested [..] with sorted attributes.
std::string encode_pattern(const Pattern& p);

/// Token indices of one match, one per slot, strictly increasing.
struct MatchSpan {
    std::vector<int> token_indices;

    bool operator==(const MatchSpan&) const = default;
};

/// All matches that are leftmost-minimal per starting position: for every
/// token index at which a full match can start, the span taking the earliest
/// feasible index for each later slot. Ordered by first token index.
std::vector<MatchSpan> find_spans(const Pattern& p, const Document& doc);

/// True iff the document contains the pattern at all.
bool matches(const Pattern& p, const Document& doc);

/// Sound syntactic subsumption test for "every text matched by p1 is matched
/// by p2". Looks for an order-preserving injective mapping of p2's slots into
/// p1's slots with attribute containment and compatible worst-case gaps.
/// A true answer is always semantically correct; false may be conservative.
bool more_specific_or_equal(const Pattern& p1, const Pattern& p2);

/// more_specific_or_equal(p1,p2) and not more_specific_or_equal(p2,p1).
bool strictly_more_specific(const Pattern& p1, const Pattern& p2);

/// Pattern file: JSON array of {"slots": [["KIND:value", ...], ...], "gaps": int}.
std::vector<Pattern> load_patterns(const std::string& path);
void save_patterns(const std::vector<Pattern>& patterns, const std::string& path);
Pattern pattern_from_json_text(const std::string& text);
std::string pattern_to_json_text(const Pattern& p);

} // namespace argex
