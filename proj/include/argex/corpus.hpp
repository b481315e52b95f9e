#pragma once

#include <compare>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace argex {

/// One annotation on a token, e.g. {TEXT, "nothing"} or {SENTIMENT, "pos"}.
struct Attribute {
    std::string kind;
    std::string value;

    auto operator<=>(const Attribute&) const = default;
};

/// Parses "KIND:value" (split at the first colon). Both parts must be non-empty.
Attribute parse_attribute(const std::string& text);
std::string attribute_string(const Attribute& attr);

struct Token {
    std::string surface;
    std::vector<Attribute> attributes; // sorted, unique

    bool has_attribute(const Attribute& attr) const;
    /// Inserts keeping the sorted-unique invariant.
    void add_attribute(Attribute attr);

    bool operator==(const Token&) const = default;
};

struct Document {
    std::string id;
    std::vector<Token> tokens;
    std::optional<int> label; // 0 or 1 when present

    bool operator==(const Document&) const = default;
};

struct Dataset {
    std::vector<Document> documents;

    bool operator==(const Dataset&) const = default;
    /// True iff every document is labeled and both classes occur.
    bool has_both_classes() const;
};

/// A flat word list emitting one attribute, e.g. SENTIMENT:pos.
struct Lexicon {
    std::string kind;
    std::string value;
    std::unordered_set<std::string> entries; // lowercased words

    bool contains(const std::string& lowercased_word) const {
        return entries.count(lowercased_word) > 0;
    }
};

/// Corpus file: UTF-8, one JSON object per line:
///   {"id": str, "label": 0|1 (optional), "tokens": [{"surface": str, "attrs": ["KIND:value", ...]}]}
/// Throws on unreadable files, malformed lines (with line number), duplicate
/// ids, and labels outside {0,1}.
Dataset load_corpus(const std::string& path);
void save_corpus(const Dataset& data, const std::string& path);

Document parse_document_line(const std::string& line);
std::string document_to_line(const Document& doc);

/// Lexicon file: first line "KIND:value", then one word per line.
Lexicon load_lexicon(const std::string& path);

/// Returns a copy where every token carries TEXT:<lowercased surface> plus,
/// for each lexicon listing the lowercased surface, the lexicon's attribute.
/// Attributes already present are kept. Idempotent.
Document annotate(const Document& doc, const std::vector<Lexicon>& lexicons);
Dataset annotate(const Dataset& data, const std::vector<Lexicon>& lexicons);

} // namespace argex
