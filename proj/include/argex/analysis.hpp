#pragma once

#include "argex/qbaf.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace argex {

/// Per-framework counts used by the statistics reports.
struct FrameworkStats {
    long n_arguments = 0;          // |A|
    long n_class1 = 0;             // arguments supporting class 1
    long n_class0 = 0;             // arguments supporting class 0
    long n_relations = 0;          // |R|
    long n_relations_non_delta = 0; // pairs whose target is not delta
    long n_attacks = 0;            // |R-|
    long n_supports = 0;           // |R+|

    bool operator==(const FrameworkStats&) const = default;
};

FrameworkStats framework_stats(const Qbafc& fw);

inline constexpr int kStatMeasureCount = 7;
extern const std::array<const char*, kStatMeasureCount> kStatMeasureNames;
std::array<long, kStatMeasureCount> stat_values(const FrameworkStats& s);

enum class ConfusionCell { TP, TN, FP, FN };

ConfusionCell confusion_cell(int true_label, int predicted_label);
std::string confusion_cell_name(ConfusionCell cell);

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0; // sample SD (n-1); 0 for singleton groups
    long count = 0;
};

struct StatsGroup {
    long count = 0;
    std::array<MeanSd, kStatMeasureCount> measures;
};

/// Group means and standard deviations per measure: overall plus one group
/// per confusion cell (absent when the cell has no members).
struct AggregateStats {
    StatsGroup all;
    std::array<std::optional<StatsGroup>, 4> by_cell; // indexed by ConfusionCell
};

AggregateStats aggregate_stats(const std::vector<FrameworkStats>& stats,
                               const std::vector<std::pair<int, int>>& labels);

std::string aggregate_stats_table(const AggregateStats& agg, const std::string& title);
std::string aggregate_stats_json_text(const AggregateStats& agg);

struct SufficiencyResult {
    std::string argument_id;
    std::optional<int> min_k; // empty means unreachable
};

/// Smallest number of the target's supporters whose contributions, together
/// with the base score and net of all attackers, push the strength strictly
/// above zero. Requires a post-processed framework. Greedy by contribution
/// (optimal, as post-processed contributions are non-negative).
SufficiencyResult sufficiency_min_k(int target, const Qbafc& fw, const StrengthMap& s);

enum class TargetKind { Default, Intermediate };
enum class FlipFilter { All, Flipped, NotFlipped };

TargetKind target_kind_from_name(const std::string& name);
FlipFilter flip_filter_from_name(const std::string& name);

/// One evaluated document: a post-processed framework, its strengths, and
/// which arguments changed class during post-processing.
struct PostFramework {
    Qbafc fw;
    StrengthMap sigma;
    std::vector<bool> flipped;
};

/// Percentage of qualifying arguments with min_k <= k, for k = 0 .. the
/// largest supporter count seen. Intermediate targets are the non-default
/// arguments with at least one attacker or supporter. Monotone in k.
std::vector<std::pair<int, double>> sufficiency_curve(
    const std::vector<PostFramework>& cases, TargetKind kind, FlipFilter filter);

std::string sufficiency_curve_csv(const std::vector<std::pair<int, double>>& curve);

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool zero_division = false; // some denominator was zero and reported as 0
};

struct MetricsReport {
    long total = 0;
    long tp = 0, tn = 0, fp = 0, fn = 0;
    double accuracy = 0.0;
    std::array<ClassMetrics, 2> per_class; // index = class
    double micro_precision = 0.0, micro_recall = 0.0, micro_f1 = 0.0;
    double macro_precision = 0.0, macro_recall = 0.0, macro_f1 = 0.0;
    bool zero_division = false;
};

/// Accuracy, per-class precision/recall/F1 and micro/macro aggregates over
/// (true label, predicted label) pairs. Throws on empty input.
MetricsReport metrics(const std::vector<std::pair<int, int>>& pairs);

/// Sample Pearson correlation. Throws on length mismatch, fewer than two
/// points, or zero variance on either side.
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

} // namespace argex
