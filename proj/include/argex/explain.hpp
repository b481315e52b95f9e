#pragma once

#include "argex/model.hpp"
#include "argex/qbaf.hpp"

#include <string>
#include <vector>

namespace argex {

/// One ranked entry of an argumentative explanation.
struct ExplanationItem {
    std::string argument_id;
    int pattern_index = -1;
    std::string pattern_encoding;
    std::vector<int> span_indices; // matched token indices (first span)
    std::string span_text;         // matched tokens joined by spaces
    double strength = 0.0;         // sigma' (non-negative)
    int supported_class = 0;       // c'
    bool is_supporter = true;      // polarity towards the parent argument

    bool operator==(const ExplanationItem&) const = default;
};

struct DeepNode {
    ExplanationItem item;
    std::vector<DeepNode> children;

    bool operator==(const DeepNode&) const = default;
};

/// Direct neighbors of the default argument in a post-processed framework:
/// supporters first, then (if requested) attackers, each ranked by strength
/// descending with pattern-index ties ascending and truncated to k.
std::vector<ExplanationItem> shallow_axplr(const Qbafc& fw, const StrengthMap& s,
                                           const PlrModel& model, const Document& doc,
                                           int k, bool include_attackers);

/// Shallow items as roots, recursively expanded with each argument's own
/// supporters and attackers (same ordering rule at every level). Arguments
/// reachable through several parents are duplicated per parent.
std::vector<DeepNode> deep_axplr(const Qbafc& fw, const StrengthMap& s,
                                 const PlrModel& model, const Document& doc, int k);

/// Signed score: +sigma' for class 1, -sigma' for class 0, so larger always
/// means stronger evidence for the positive class.
double adjusted_score(const ExplanationItem& item);

/// Per-token sums of the adjusted scores of all items whose span covers the
/// token; tokens outside every span score 0.
std::vector<double> token_highlights(const Document& doc,
                                     const std::vector<ExplanationItem>& items);

/// Flat-LR entry with presentation fields resolved.
struct FlxEntry {
    int pattern_index = -1;
    std::string pattern_encoding;
    std::vector<int> span_indices;
    std::string span_text;
    double contribution = 0.0;

    bool operator==(const FlxEntry&) const = default;
};

std::vector<FlxEntry> flx_entries(const PlrModel& model, const Document& doc, int k);

/// A fully assembled explanation of one prediction, ready for rendering.
struct Explanation {
    std::string document_id;
    std::vector<std::string> tokens; // surfaces
    Prediction prediction;
    std::string variant; // "top_down" | "bottom_up"
    std::string method;  // "flx" | "shallow" | "deep"
    std::vector<FlxEntry> flx_items;
    std::vector<ExplanationItem> shallow;
    std::vector<DeepNode> deep;
    std::vector<double> highlights; // per token

    bool operator==(const Explanation&) const = default;
};

Explanation explain_document(const PlrModel& model, const Document& annotated_doc,
                             const std::string& method, Variant variant, int k);

enum class RenderFormat { Text, Json, Html };
RenderFormat render_format_from_name(const std::string& name);

/// Deterministic bytes; JSON round-trips losslessly through the types above,
/// HTML is a single self-contained file using <details> disclosure elements
/// for expandable deep nodes.
std::string render(const Explanation& e, RenderFormat format);

std::string explanation_to_json_text(const Explanation& e);
Explanation explanation_from_json_text(const std::string& text);

} // namespace argex
