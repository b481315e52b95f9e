#pragma once

#include "argex/corpus.hpp"
#include "argex/model.hpp"

#include <string>
#include <utility>
#include <vector>

namespace argex {

/// TopDown: specific patterns point at general ones, the most general point
/// at the default argument. BottomUp: the reverse arrangement.
enum class Variant { TopDown, BottomUp };

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& name);

struct Argument {
    int pattern_index = -1; // -1 marks the default argument (bias term)
    double tau = 0.0;       // base score; may turn negative after post-processing
    int supported_class = 0;

    bool is_default() const { return pattern_index < 0; }
    std::string id() const {
        return is_default() ? "delta" : "a" + std::to_string(pattern_index);
    }
};

/// Quantitative bipolar argumentation framework with supported classes.
/// Arguments are ordered by pattern index with the default argument last;
/// edges are (source, target) pairs of argument indices, kept sorted.
struct Qbafc {
    Variant variant = Variant::TopDown;
    bool post_processed = false;
    std::vector<Argument> arguments;
    std::vector<std::pair<int, int>> attacks;
    std::vector<std::pair<int, int>> supports;

    int delta_index() const;
    size_t size() const { return arguments.size(); }
    std::vector<int> out_degrees() const;
    /// Attackers / supporters of each argument (edge sources), sorted.
    std::vector<std::vector<int>> attackers_of() const;
    std::vector<std::vector<int>> supporters_of() const;
    void sort_edges();
};

/// sigma value per argument, indexed like Qbafc::arguments.
using StrengthMap = std::vector<double>;

/// Throws if any structural invariant fails: exactly one default argument
/// with out-degree zero, disjoint edge sets with valid endpoints, edge
/// polarity consistent with class equality, and acyclicity.
void validate_structure(const Qbafc& fw);

/// Extracts the framework for one document: an argument per matched pattern
/// plus the default argument; tau = |weight|, supported class from the weight
/// sign; edges from strict pattern specificity (restricted to the matched
/// patterns, immediate pairs only), arranged per the variant.
Qbafc build_qbafc(const PlrModel& model, const Document& doc, Variant variant);

/// Evaluates sigma(a) = tau(a) + sum supp sigma(b)/nu(b) - sum att sigma(b)/nu(b)
/// in topological order; nu(b) is b's out-degree in this framework.
/// Throws std::logic_error if a cycle is detected.
StrengthMap compute_strengths(const Qbafc& fw);

/// Arguments whose strength is negative flip base-score sign and supported
/// class; edges are relabeled from the new classes; edges whose source has
/// exactly zero strength are dropped. Returns the new framework and its
/// recomputed strengths (equal to |sigma| by construction).
std::pair<Qbafc, StrengthMap> postprocess(const Qbafc& fw, const StrengthMap& s);

/// flipped[i] = true iff post-processing changes argument i's class.
std::vector<bool> flipped_classes(const StrengthMap& pre_strengths);

struct Prediction {
    int predicted_class = 1;
    double probability = 0.5; // probability of the predicted class

    bool operator==(const Prediction&) const = default;
};

/// Reads the model prediction off the default argument's strength.
Prediction inferred_prediction(const Qbafc& fw, const StrengthMap& s);

/// Framework file (JSON): arguments with id/origin/tau/class, sorted edge
/// id pairs, variant, post_processed, optional sigma map. Reals are stored
/// as shortest round-trip decimal strings.
std::string qbafc_to_json_text(const Qbafc& fw, const StrengthMap* sigma = nullptr);
Qbafc qbafc_from_json_text(const std::string& text, StrengthMap* sigma_out = nullptr);

/// DOT export: green nodes for class 1, red for class 0, edges labeled +/-.
/// Optional per-argument extra label lines (e.g. pattern encodings).
std::string qbafc_to_dot(const Qbafc& fw, const StrengthMap* sigma = nullptr,
                         const std::vector<std::string>* labels = nullptr);

} // namespace argex
