#include "argex/explain.hpp"
#include "argex/text.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "json.hpp"

namespace argex {

using nlohmann::json;

namespace {

ExplanationItem make_item(const Qbafc& fw, const StrengthMap& s, const PlrModel& model,
                          const Document& doc, int arg_index, bool is_supporter) {
    const Argument& arg = fw.arguments[arg_index];
    ExplanationItem item;
    item.argument_id = arg.id();
    item.pattern_index = arg.pattern_index;
    item.strength = s[arg_index];
    item.supported_class = arg.supported_class;
    item.is_supporter = is_supporter;
    if (!arg.is_default()) {
        const Pattern& pattern = model.patterns[arg.pattern_index];
        item.pattern_encoding = encode_pattern(pattern);
        auto spans = find_spans(pattern, doc);
        if (!spans.empty()) {
            item.span_indices = spans.front().token_indices;
            for (size_t i = 0; i < item.span_indices.size(); ++i) {
                if (i > 0) item.span_text += " ";
                item.span_text += doc.tokens[item.span_indices[i]].surface;
            }
        }
    }
    return item;
}

// Supporters first, then attackers; each block by strength descending,
// pattern-index ties ascending.
std::vector<std::pair<int, bool>> ranked_neighbors(const Qbafc& fw, const StrengthMap& s,
                                                   int target, int k_per_polarity,
                                                   bool include_attackers) {
    auto rank = [&](std::vector<int> sources) {
        std::sort(sources.begin(), sources.end(), [&](int a, int b) {
            if (s[a] != s[b]) return s[a] > s[b];
            return fw.arguments[a].pattern_index < fw.arguments[b].pattern_index;
        });
        if (k_per_polarity >= 0 &&
            static_cast<int>(sources.size()) > k_per_polarity) {
            sources.resize(k_per_polarity);
        }
        return sources;
    };
    std::vector<std::pair<int, bool>> out;
    for (int a : rank(fw.supporters_of()[target])) out.emplace_back(a, true);
    if (include_attackers) {
        for (int a : rank(fw.attackers_of()[target])) out.emplace_back(a, false);
    }
    return out;
}

} // namespace

std::vector<ExplanationItem> shallow_axplr(const Qbafc& fw, const StrengthMap& s,
                                           const PlrModel& model, const Document& doc,
                                           int k, bool include_attackers) {
    if (!fw.post_processed) {
        throw std::invalid_argument("shallow explanation needs a post-processed framework");
    }
    if (k < 0) throw std::invalid_argument("k must be non-negative");
    std::vector<ExplanationItem> items;
    for (auto [src, is_supp] :
         ranked_neighbors(fw, s, fw.delta_index(), k, include_attackers)) {
        items.push_back(make_item(fw, s, model, doc, src, is_supp));
    }
    return items;
}

namespace {

DeepNode expand(const Qbafc& fw, const StrengthMap& s, const PlrModel& model,
                const Document& doc, int arg_index, bool is_supporter) {
    DeepNode node;
    node.item = make_item(fw, s, model, doc, arg_index, is_supporter);
    for (auto [src, supp] : ranked_neighbors(fw, s, arg_index, -1, true)) {
        node.children.push_back(expand(fw, s, model, doc, src, supp));
    }
    return node;
}

} // namespace

std::vector<DeepNode> deep_axplr(const Qbafc& fw, const StrengthMap& s,
                                 const PlrModel& model, const Document& doc, int k) {
    if (!fw.post_processed) {
        throw std::invalid_argument("deep explanation needs a post-processed framework");
    }
    if (k < 0) throw std::invalid_argument("k must be non-negative");
    std::vector<DeepNode> roots;
    for (auto [src, is_supp] : ranked_neighbors(fw, s, fw.delta_index(), k, true)) {
        roots.push_back(expand(fw, s, model, doc, src, is_supp));
    }
    return roots;
}

double adjusted_score(const ExplanationItem& item) {
    return item.supported_class == 1 ? item.strength : -item.strength;
}

std::vector<double> token_highlights(const Document& doc,
                                     const std::vector<ExplanationItem>& items) {
    std::vector<double> scores(doc.tokens.size(), 0.0);
    for (const auto& item : items) {
        double adj = adjusted_score(item);
        for (int t : item.span_indices) {
            if (t >= 0 && t < static_cast<int>(scores.size())) scores[t] += adj;
        }
    }
    return scores;
}

std::vector<FlxEntry> flx_entries(const PlrModel& model, const Document& doc, int k) {
    std::vector<FlxEntry> entries;
    for (const auto& item : flx(model, doc, k)) {
        FlxEntry entry;
        entry.pattern_index = item.pattern_index;
        entry.pattern_encoding = encode_pattern(model.patterns[item.pattern_index]);
        entry.contribution = item.contribution;
        if (item.span) {
            entry.span_indices = item.span->token_indices;
            for (size_t i = 0; i < entry.span_indices.size(); ++i) {
                if (i > 0) entry.span_text += " ";
                entry.span_text += doc.tokens[entry.span_indices[i]].surface;
            }
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

Explanation explain_document(const PlrModel& model, const Document& doc,
                             const std::string& method, Variant variant, int k) {
    Explanation e;
    e.document_id = doc.id;
    for (const auto& tok : doc.tokens) e.tokens.push_back(tok.surface);
    e.method = method;
    e.variant = variant_name(variant);

    FeatureVector f = extract_features(model, doc);
    double proba1 = predict_proba(model, f);
    e.prediction.predicted_class = predicted_class(proba1);
    e.prediction.probability =
        e.prediction.predicted_class == 1 ? proba1 : 1.0 - proba1;

    if (method == "flx") {
        e.flx_items = flx_entries(model, doc, k);
        std::vector<ExplanationItem> pseudo;
        for (const auto& entry : e.flx_items) {
            ExplanationItem item;
            item.span_indices = entry.span_indices;
            item.strength = std::abs(entry.contribution);
            item.supported_class = entry.contribution >= 0.0
                                       ? e.prediction.predicted_class
                                       : 1 - e.prediction.predicted_class;
            pseudo.push_back(std::move(item));
        }
        e.highlights = token_highlights(doc, pseudo);
        return e;
    }

    Qbafc fw = build_qbafc(model, doc, variant);
    StrengthMap sigma = compute_strengths(fw);
    auto [post_fw, post_sigma] = postprocess(fw, sigma);
    e.prediction = inferred_prediction(post_fw, post_sigma);
    e.shallow = shallow_axplr(post_fw, post_sigma, model, doc, k, true);
    if (method == "deep") {
        e.deep = deep_axplr(post_fw, post_sigma, model, doc, k);
    } else if (method != "shallow") {
        throw std::invalid_argument("unknown explanation method '" + method + "'");
    }
    e.highlights = token_highlights(doc, e.shallow);
    return e;
}

RenderFormat render_format_from_name(const std::string& name) {
    if (name == "text") return RenderFormat::Text;
    if (name == "json") return RenderFormat::Json;
    if (name == "html") return RenderFormat::Html;
    throw std::invalid_argument("unknown render format '" + name + "'");
}

namespace {

json item_to_json(const ExplanationItem& item) {
    json obj;
    obj["argument"] = item.argument_id;
    obj["pattern_index"] = item.pattern_index;
    obj["pattern"] = item.pattern_encoding;
    obj["span"] = item.span_indices;
    obj["span_text"] = item.span_text;
    obj["strength"] = item.strength;
    obj["class"] = item.supported_class;
    obj["polarity"] = item.is_supporter ? "supporter" : "attacker";
    return obj;
}

ExplanationItem item_from_json(const json& obj) {
    ExplanationItem item;
    item.argument_id = obj.at("argument").get<std::string>();
    item.pattern_index = obj.at("pattern_index").get<int>();
    item.pattern_encoding = obj.at("pattern").get<std::string>();
    item.span_indices = obj.at("span").get<std::vector<int>>();
    item.span_text = obj.at("span_text").get<std::string>();
    item.strength = obj.at("strength").get<double>();
    item.supported_class = obj.at("class").get<int>();
    item.is_supporter = obj.at("polarity").get<std::string>() == "supporter";
    return item;
}

json deep_to_json(const DeepNode& node) {
    json obj = item_to_json(node.item);
    json children = json::array();
    for (const auto& child : node.children) children.push_back(deep_to_json(child));
    obj["children"] = std::move(children);
    return obj;
}

DeepNode deep_from_json(const json& obj) {
    DeepNode node;
    node.item = item_from_json(obj);
    for (const auto& child : obj.at("children")) {
        node.children.push_back(deep_from_json(child));
    }
    return node;
}

std::string render_text(const Explanation& e) {
    std::string out;
    out += "document: " + e.document_id + "\n";
    out += "prediction: class " + std::to_string(e.prediction.predicted_class) +
           " (p=" + format_double(e.prediction.probability) + ")\n";
    out += "method: " + e.method + "\n";
    if (e.method != "flx") out += "variant: " + e.variant + "\n";
    if (e.method == "flx") {
        out += "contributions:\n";
        for (const auto& entry : e.flx_items) {
            out += "  " + entry.pattern_encoding + "  \"" + entry.span_text +
                   "\"  s=" + format_double(entry.contribution) + "\n";
        }
        return out;
    }
    auto item_line = [](const ExplanationItem& item, int depth) {
        std::string line(2 * (depth + 1), ' ');
        line += item.is_supporter ? "+ " : "- ";
        line += item.pattern_encoding + "  \"" + item.span_text +
                "\"  strength=" + format_double(item.strength) + "  class=" +
                std::to_string(item.supported_class) + "\n";
        return line;
    };
    out += "arguments:\n";
    if (e.method == "deep") {
        std::function<void(const DeepNode&, int)> walk = [&](const DeepNode& node,
                                                             int depth) {
            out += item_line(node.item, depth);
            for (const auto& child : node.children) walk(child, depth + 1);
        };
        for (const auto& root : e.deep) walk(root, 0);
    } else {
        for (const auto& item : e.shallow) out += item_line(item, 0);
    }
    return out;
}

std::string html_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string render_html(const Explanation& e) {
    double max_abs = 0.0;
    for (double h : e.highlights) max_abs = std::max(max_abs, std::abs(h));

    std::string out =
        "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n"
        "<title>prediction " + e.document_id + "</title>\n"
        "<style>\n"
        "body { font-family: sans-serif; margin: 2em; }\n"
        ".tokens span { padding: 0 2px; border-radius: 3px; }\n"
        ".item { margin: 2px 0; }\n"
        ".cls1 { color: #116329; }\n"
        ".cls0 { color: #a40e26; }\n"
        "details { margin-left: 1.2em; }\n"
        "ul { list-style: none; padding-left: 1.2em; }\n"
        "</style>\n</head>\n<body>\n";
    out += "<h2>document " + html_escape(e.document_id) + "</h2>\n";
    out += "<p class=\"banner\">predicted class <b>" +
           std::to_string(e.prediction.predicted_class) + "</b> with probability <b>" +
           format_double(e.prediction.probability) + "</b> (" + e.method;
    if (e.method != "flx") out += ", " + e.variant;
    out += ")</p>\n";

    out += "<p class=\"tokens\">";
    for (size_t t = 0; t < e.tokens.size(); ++t) {
        double h = t < e.highlights.size() ? e.highlights[t] : 0.0;
        if (h != 0.0 && max_abs > 0.0) {
            double opacity = std::abs(h) / max_abs;
            std::string color = h > 0.0 ? "46,160,67" : "218,54,51";
            out += "<span style=\"background-color: rgba(" + color + "," +
                   format_double(opacity) + ")\">" + html_escape(e.tokens[t]) + "</span> ";
        } else {
            out += html_escape(e.tokens[t]) + " ";
        }
    }
    out += "</p>\n";

    auto item_html = [](const ExplanationItem& item) {
        std::string cls = "cls" + std::to_string(item.supported_class);
        return "<span class=\"" + cls + "\">" + std::string(item.is_supporter ? "+" : "&minus;") +
               " " + html_escape(item.pattern_encoding) + " &ldquo;" +
               html_escape(item.span_text) + "&rdquo; (strength " +
               format_double(item.strength) + ")</span>";
    };

    if (e.method == "flx") {
        out += "<ul>\n";
        for (const auto& entry : e.flx_items) {
            out += "<li class=\"item\">" + html_escape(entry.pattern_encoding) +
                   " &ldquo;" + html_escape(entry.span_text) + "&rdquo; (s " +
                   format_double(entry.contribution) + ")</li>\n";
        }
        out += "</ul>\n";
    } else if (e.method == "deep") {
        std::function<std::string(const DeepNode&)> walk = [&](const DeepNode& node) {
            if (node.children.empty()) {
                return "<li class=\"item\">" + item_html(node.item) + "</li>\n";
            }
            std::string block = "<li class=\"item\"><details><summary>" +
                                item_html(node.item) + "</summary>\n<ul>\n";
            for (const auto& child : node.children) block += walk(child);
            block += "</ul>\n</details></li>\n";
            return block;
        };
        out += "<ul>\n";
        for (const auto& root : e.deep) out += walk(root);
        out += "</ul>\n";
    } else {
        out += "<ul>\n";
        for (const auto& item : e.shallow) {
            out += "<li class=\"item\">" + item_html(item) + "</li>\n";
        }
        out += "</ul>\n";
    }
    out += "</body>\n</html>\n";
    return out;
}

} // namespace

std::string explanation_to_json_text(const Explanation& e) {
    json obj;
    obj["id"] = e.document_id;
    obj["method"] = e.method;
    obj["variant"] = e.variant;
    obj["prediction"] = {{"class", e.prediction.predicted_class},
                         {"probability", e.prediction.probability}};
    obj["tokens"] = e.tokens;
    json flx_arr = json::array();
    for (const auto& entry : e.flx_items) {
        flx_arr.push_back({{"pattern_index", entry.pattern_index},
                           {"pattern", entry.pattern_encoding},
                           {"span", entry.span_indices},
                           {"span_text", entry.span_text},
                           {"contribution", entry.contribution}});
    }
    obj["flx"] = std::move(flx_arr);
    json shallow = json::array();
    for (const auto& item : e.shallow) shallow.push_back(item_to_json(item));
    obj["shallow"] = std::move(shallow);
    json deep = json::array();
    for (const auto& node : e.deep) deep.push_back(deep_to_json(node));
    obj["deep"] = std::move(deep);
    obj["highlights"] = e.highlights;
    return obj.dump();
}

Explanation explanation_from_json_text(const std::string& text) {
    json obj = json::parse(text);
    Explanation e;
    e.document_id = obj.at("id").get<std::string>();
    e.method = obj.at("method").get<std::string>();
    e.variant = obj.at("variant").get<std::string>();
    e.prediction.predicted_class = obj.at("prediction").at("class").get<int>();
    e.prediction.probability = obj.at("prediction").at("probability").get<double>();
    e.tokens = obj.at("tokens").get<std::vector<std::string>>();
    for (const auto& entry : obj.at("flx")) {
        FlxEntry f;
        f.pattern_index = entry.at("pattern_index").get<int>();
        f.pattern_encoding = entry.at("pattern").get<std::string>();
        f.span_indices = entry.at("span").get<std::vector<int>>();
        f.span_text = entry.at("span_text").get<std::string>();
        f.contribution = entry.at("contribution").get<double>();
        e.flx_items.push_back(std::move(f));
    }
    for (const auto& item : obj.at("shallow")) e.shallow.push_back(item_from_json(item));
    for (const auto& node : obj.at("deep")) e.deep.push_back(deep_from_json(node));
    e.highlights = obj.at("highlights").get<std::vector<double>>();
    return e;
}

std::string render(const Explanation& e, RenderFormat format) {
    switch (format) {
        case RenderFormat::Text: return render_text(e);
        case RenderFormat::Json: return explanation_to_json_text(e) + "\n";
        case RenderFormat::Html: return render_html(e);
    }
    throw std::invalid_argument("unknown render format");
}

} // namespace argex
