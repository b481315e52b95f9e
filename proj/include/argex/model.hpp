#pragma once

#include "argex/corpus.hpp"
#include "argex/pattern.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace argex {

/// Binary presence features, one bit per model pattern.
using FeatureVector = std::vector<uint8_t>;

/// Pattern-based logistic regression classifier: P(y=1|x) = sigmoid(w.f + b).
struct PlrModel {
    std::vector<Pattern> patterns;
    std::vector<double> weights;
    double bias = 0.0;
    std::map<std::string, std::string> meta;

    size_t dimension() const { return patterns.size(); }
    /// Throws if weights/patterns disagree, a weight is non-finite, or two
    /// patterns share their canonical encoding.
    void validate() const;
};

double sigmoid(double z);

/// bit i = 1 iff patterns[i] occurs in the document.
FeatureVector extract_features(const PlrModel& model, const Document& doc);

double predict_proba(const PlrModel& model, const FeatureVector& f);

/// Class 1 iff P(y=1|x) >= 0.5.
int predicted_class(double proba_class1);

struct TrainConfig {
    double learning_rate = 0.5;
    double l2_lambda = 0.0;
    int epochs = 1000;
    uint64_t seed = 0; // reserved; training is deterministic (zero init)
};

struct TrainResult {
    PlrModel model;
    double final_loss = 0.0;
};

/// Full-batch gradient descent on L2-regularized binary cross-entropy
/// (mean over documents, bias unregularized, weights start at zero).
TrainResult train(const Dataset& data, std::vector<Pattern> patterns,
                  const TrainConfig& config);

/// Mean binary cross-entropy plus (l2_lambda/2)*|w|^2.
double training_loss(const PlrModel& model, const std::vector<FeatureVector>& features,
                     const std::vector<int>& labels, double l2_lambda);

/// Analytic gradient of training_loss: (d/dw, d/db).
std::pair<std::vector<double>, double> loss_gradient(
    const PlrModel& model, const std::vector<FeatureVector>& features,
    const std::vector<int>& labels, double l2_lambda);

/// One entry of a flat logistic regression explanation: the pattern's signed
/// contribution s_i = (-1)^(yhat+1) * w_i for matched patterns.
struct FlxItem {
    int pattern_index = -1;
    std::optional<MatchSpan> span; // first span in the document
    double contribution = 0.0;
};

/// Top-k matched patterns by contribution towards the predicted class,
/// descending, ties broken by pattern index. Patterns with zero
/// contribution are excluded.
std::vector<FlxItem> flx(const PlrModel& model, const Document& doc, int k);

/// Model file: {"patterns": [...], "weights": ["<decimal>", ...],
/// "bias": "<decimal>", "meta": {...}}; reals stored as shortest
/// round-trip decimal strings.
PlrModel load_model(const std::string& path);
void save_model(const PlrModel& model, const std::string& path);

} // namespace argex
