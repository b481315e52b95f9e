#include "argex/corpus.hpp"
#include "argex/text.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

namespace argex {

using nlohmann::json;

Attribute parse_attribute(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == text.size()) {
        throw std::runtime_error("malformed attribute '" + text + "' (expected KIND:value)");
    }
    return Attribute{text.substr(0, colon), text.substr(colon + 1)};
}

std::string attribute_string(const Attribute& attr) {
    return attr.kind + ":" + attr.value;
}

bool Token::has_attribute(const Attribute& attr) const {
    return std::binary_search(attributes.begin(), attributes.end(), attr);
}

void Token::add_attribute(Attribute attr) {
    auto it = std::lower_bound(attributes.begin(), attributes.end(), attr);
    if (it == attributes.end() || *it != attr) {
        attributes.insert(it, std::move(attr));
    }
}

bool Dataset::has_both_classes() const {
    bool seen[2] = {false, false};
    for (const auto& doc : documents) {
        if (!doc.label) return false;
        seen[*doc.label] = true;
    }
    return seen[0] && seen[1];
}

Document parse_document_line(const std::string& line) {
    json obj = json::parse(line);
    Document doc;
    doc.id = obj.at("id").get<std::string>();
    if (obj.contains("label") && !obj["label"].is_null()) {
        int label = obj["label"].get<int>();
        if (label != 0 && label != 1) {
            throw std::runtime_error("label must be 0 or 1, got " + std::to_string(label));
        }
        doc.label = label;
    }
    for (const auto& tok_obj : obj.at("tokens")) {
        Token tok;
        tok.surface = tok_obj.at("surface").get<std::string>();
        if (tok_obj.contains("attrs")) {
            for (const auto& attr_str : tok_obj["attrs"]) {
                tok.add_attribute(parse_attribute(attr_str.get<std::string>()));
            }
        }
        doc.tokens.push_back(std::move(tok));
    }
    return doc;
}

std::string document_to_line(const Document& doc) {
    json obj;
    obj["id"] = doc.id;
    if (doc.label) obj["label"] = *doc.label;
    json tokens = json::array();
    for (const auto& tok : doc.tokens) {
        json tok_obj;
        tok_obj["surface"] = tok.surface;
        if (!tok.attributes.empty()) {
            json attrs = json::array();
            for (const auto& attr : tok.attributes) attrs.push_back(attribute_string(attr));
            tok_obj["attrs"] = std::move(attrs);
        }
        tokens.push_back(std::move(tok_obj));
    }
    obj["tokens"] = std::move(tokens);
    return obj.dump();
}

Dataset load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open corpus file '" + path + "'");
    }
    Dataset data;
    std::unordered_set<std::string> ids;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        Document doc;
        try {
            doc = parse_document_line(line);
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (!ids.insert(doc.id).second) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": duplicate document id '" + doc.id + "'");
        }
        data.documents.push_back(std::move(doc));
    }
    return data;
}

void save_corpus(const Dataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write corpus file '" + path + "'");
    }
    for (const auto& doc : data.documents) {
        out << document_to_line(doc) << "\n";
    }
}

Lexicon load_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open lexicon file '" + path + "'");
    }
    std::string header;
    if (!std::getline(in, header) || header.empty()) {
        throw std::runtime_error(path + ": missing KIND:value header line");
    }
    if (!header.empty() && header.back() == '\r') header.pop_back();
    Attribute emitted = parse_attribute(header);
    Lexicon lex;
    lex.kind = emitted.kind;
    lex.value = emitted.value;
    std::string word;
    while (std::getline(in, word)) {
        if (!word.empty() && word.back() == '\r') word.pop_back();
        if (word.empty()) continue;
        lex.entries.insert(to_lower_ascii(word));
    }
    if (lex.entries.empty()) {
        throw std::runtime_error(path + ": lexicon has no entries");
    }
    return lex;
}

Document annotate(const Document& doc, const std::vector<Lexicon>& lexicons) {
    Document out = doc;
    for (auto& tok : out.tokens) {
        std::string lowered = to_lower_ascii(tok.surface);
        tok.add_attribute(Attribute{"TEXT", lowered});
        for (const auto& lex : lexicons) {
            if (lex.contains(lowered)) {
                tok.add_attribute(Attribute{lex.kind, lex.value});
            }
        }
    }
    return out;
}

Dataset annotate(const Dataset& data, const std::vector<Lexicon>& lexicons) {
    Dataset out;
    out.documents.reserve(data.documents.size());
    for (const auto& doc : data.documents) {
        out.documents.push_back(annotate(doc, lexicons));
    }
    return out;
}

} // namespace argex
