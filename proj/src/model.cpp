#include "argex/model.hpp"
#include "argex/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

namespace argex {

using nlohmann::json;

void PlrModel::validate() const {
    if (weights.size() != patterns.size()) {
        throw std::runtime_error("model has " + std::to_string(patterns.size()) +
                                 " patterns but " + std::to_string(weights.size()) + " weights");
    }
    if (!std::isfinite(bias)) throw std::runtime_error("model bias is not finite");
    std::unordered_set<std::string> encodings;
    for (size_t i = 0; i < patterns.size(); ++i) {
        if (!std::isfinite(weights[i])) {
            throw std::runtime_error("weight " + std::to_string(i) + " is not finite");
        }
        if (patterns[i].slots.empty()) {
            throw std::runtime_error("pattern " + std::to_string(i) + " has no slots");
        }
        if (!encodings.insert(encode_pattern(patterns[i])).second) {
            throw std::runtime_error("duplicate pattern " + encode_pattern(patterns[i]));
        }
    }
}

double sigmoid(double z) {
    double p;
    if (z >= 0.0) {
        p = 1.0 / (1.0 + std::exp(-z));
    } else {
        double e = std::exp(z);
        p = e / (1.0 + e);
    }
    // Keep the open interval even where exp saturates.
    if (p >= 1.0) return std::nextafter(1.0, 0.0);
    if (p <= 0.0) return std::numeric_limits<double>::min();
    return p;
}

FeatureVector extract_features(const PlrModel& model, const Document& doc) {
    FeatureVector f(model.patterns.size(), 0);
    for (size_t i = 0; i < model.patterns.size(); ++i) {
        f[i] = matches(model.patterns[i], doc) ? 1 : 0;
    }
    return f;
}

double predict_proba(const PlrModel& model, const FeatureVector& f) {
    if (f.size() != model.weights.size()) {
        throw std::invalid_argument("feature vector length " + std::to_string(f.size()) +
                                    " does not match model dimension " +
                                    std::to_string(model.weights.size()));
    }
    double logit = model.bias;
    for (size_t i = 0; i < f.size(); ++i) {
        if (f[i]) logit += model.weights[i];
    }
    return sigmoid(logit);
}

int predicted_class(double proba_class1) {
    return proba_class1 >= 0.5 ? 1 : 0;
}

namespace {

// log(1 + e^z) without overflow.
double softplus(double z) {
    return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

} // namespace

double training_loss(const PlrModel& model, const std::vector<FeatureVector>& features,
                     const std::vector<int>& labels, double l2_lambda) {
    double loss = 0.0;
    for (size_t n = 0; n < features.size(); ++n) {
        double logit = model.bias;
        for (size_t i = 0; i < model.weights.size(); ++i) {
            if (features[n][i]) logit += model.weights[i];
        }
        // BCE(y, sigmoid(z)) = softplus(z) - y*z
        loss += softplus(logit) - labels[n] * logit;
    }
    loss /= static_cast<double>(features.size());
    double sq = 0.0;
    for (double w : model.weights) sq += w * w;
    return loss + 0.5 * l2_lambda * sq;
}

std::pair<std::vector<double>, double> loss_gradient(
    const PlrModel& model, const std::vector<FeatureVector>& features,
    const std::vector<int>& labels, double l2_lambda) {
    size_t dim = model.weights.size();
    std::vector<double> grad_w(dim, 0.0);
    double grad_b = 0.0;
    for (size_t n = 0; n < features.size(); ++n) {
        double logit = model.bias;
        for (size_t i = 0; i < dim; ++i) {
            if (features[n][i]) logit += model.weights[i];
        }
        double residual = sigmoid(logit) - labels[n];
        for (size_t i = 0; i < dim; ++i) {
            if (features[n][i]) grad_w[i] += residual;
        }
        grad_b += residual;
    }
    double inv_n = 1.0 / static_cast<double>(features.size());
    for (size_t i = 0; i < dim; ++i) {
        grad_w[i] = grad_w[i] * inv_n + l2_lambda * model.weights[i];
    }
    grad_b *= inv_n;
    return {std::move(grad_w), grad_b};
}

TrainResult train(const Dataset& data, std::vector<Pattern> patterns,
                  const TrainConfig& config) {
    if (config.learning_rate <= 0.0) {
        throw std::invalid_argument("learning rate must be positive");
    }
    if (config.epochs < 0) throw std::invalid_argument("epochs must be non-negative");
    if (!data.has_both_classes()) {
        throw std::invalid_argument("training needs a labeled dataset with both classes");
    }

    PlrModel model;
    model.patterns = std::move(patterns);
    model.weights.assign(model.patterns.size(), 0.0);
    model.bias = 0.0;
    model.validate();

    size_t n_docs = data.documents.size();
    size_t dim = model.dimension();
    std::vector<FeatureVector> features;
    features.reserve(n_docs);
    std::vector<int> labels;
    labels.reserve(n_docs);
    for (const auto& doc : data.documents) {
        features.push_back(extract_features(model, doc));
        labels.push_back(*doc.label);
    }

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        auto [grad_w, grad_b] = loss_gradient(model, features, labels, config.l2_lambda);
        for (size_t i = 0; i < dim; ++i) {
            model.weights[i] -= config.learning_rate * grad_w[i];
        }
        model.bias -= config.learning_rate * grad_b;
    }

    TrainResult result;
    result.final_loss = training_loss(model, features, labels, config.l2_lambda);
    result.model = std::move(model);
    return result;
}

std::vector<FlxItem> flx(const PlrModel& model, const Document& doc, int k) {
    if (k < 0) throw std::invalid_argument("k must be non-negative");
    if (k == 0) return {};
    FeatureVector f = extract_features(model, doc);
    double proba = predict_proba(model, f);
    int yhat = predicted_class(proba);
    double sign = yhat == 1 ? 1.0 : -1.0;

    std::vector<FlxItem> items;
    for (size_t i = 0; i < f.size(); ++i) {
        if (!f[i]) continue;
        double s = sign * model.weights[i];
        if (s == 0.0) continue;
        FlxItem item;
        item.pattern_index = static_cast<int>(i);
        item.contribution = s;
        auto spans = find_spans(model.patterns[i], doc);
        if (!spans.empty()) item.span = spans.front();
        items.push_back(std::move(item));
    }
    std::sort(items.begin(), items.end(), [](const FlxItem& a, const FlxItem& b) {
        if (a.contribution != b.contribution) return a.contribution > b.contribution;
        return a.pattern_index < b.pattern_index;
    });
    if (static_cast<int>(items.size()) > k) items.resize(k);
    return items;
}

PlrModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file '" + path + "'");
    json obj = json::parse(in);
    PlrModel model;
    for (const auto& pat_obj : obj.at("patterns")) {
        model.patterns.push_back(pattern_from_json_text(pat_obj.dump()));
    }
    for (const auto& w : obj.at("weights")) {
        model.weights.push_back(w.is_string() ? parse_double(w.get<std::string>())
                                              : w.get<double>());
    }
    const auto& bias = obj.at("bias");
    model.bias = bias.is_string() ? parse_double(bias.get<std::string>()) : bias.get<double>();
    if (obj.contains("meta")) {
        for (const auto& [key, val] : obj["meta"].items()) {
            model.meta[key] = val.get<std::string>();
        }
    }
    model.validate();
    return model;
}

void save_model(const PlrModel& model, const std::string& path) {
    model.validate();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file '" + path + "'");
    json obj;
    json patterns = json::array();
    for (const auto& p : model.patterns) {
        patterns.push_back(json::parse(pattern_to_json_text(p)));
    }
    obj["patterns"] = std::move(patterns);
    json weights = json::array();
    for (double w : model.weights) weights.push_back(format_double(w));
    obj["weights"] = std::move(weights);
    obj["bias"] = format_double(model.bias);
    json meta = json::object();
    for (const auto& [key, val] : model.meta) meta[key] = val;
    obj["meta"] = std::move(meta);
    out << obj.dump(2) << "\n";
}

} // namespace argex
