#include "argex/analysis.hpp"
#include "argex/text.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace argex {

using nlohmann::json;

const std::array<const char*, kStatMeasureCount> kStatMeasureNames = {
    "|A|", "|A+|", "|A-|", "|R|", "|R\\d|", "|R-|", "|R+|"};

FrameworkStats framework_stats(const Qbafc& fw) {
    FrameworkStats stats;
    stats.n_arguments = static_cast<long>(fw.size());
    for (const auto& arg : fw.arguments) {
        (arg.supported_class == 1 ? stats.n_class1 : stats.n_class0) += 1;
    }
    stats.n_attacks = static_cast<long>(fw.attacks.size());
    stats.n_supports = static_cast<long>(fw.supports.size());
    stats.n_relations = stats.n_attacks + stats.n_supports;
    int delta = fw.delta_index();
    auto count_non_delta = [&](const std::vector<std::pair<int, int>>& edges) {
        long n = 0;
        for (const auto& [src, dst] : edges) {
            if (dst != delta) ++n;
        }
        return n;
    };
    stats.n_relations_non_delta =
        count_non_delta(fw.attacks) + count_non_delta(fw.supports);
    return stats;
}

std::array<long, kStatMeasureCount> stat_values(const FrameworkStats& s) {
    return {s.n_arguments, s.n_class1,  s.n_class0, s.n_relations,
            s.n_relations_non_delta, s.n_attacks, s.n_supports};
}

ConfusionCell confusion_cell(int true_label, int predicted_label) {
    if (true_label == 1) return predicted_label == 1 ? ConfusionCell::TP : ConfusionCell::FN;
    return predicted_label == 0 ? ConfusionCell::TN : ConfusionCell::FP;
}

std::string confusion_cell_name(ConfusionCell cell) {
    switch (cell) {
        case ConfusionCell::TP: return "TP";
        case ConfusionCell::TN: return "TN";
        case ConfusionCell::FP: return "FP";
        case ConfusionCell::FN: return "FN";
    }
    return "?";
}

namespace {

StatsGroup summarize(const std::vector<const FrameworkStats*>& members) {
    StatsGroup group;
    group.count = static_cast<long>(members.size());
    for (int m = 0; m < kStatMeasureCount; ++m) {
        double sum = 0.0;
        for (const auto* s : members) sum += static_cast<double>(stat_values(*s)[m]);
        double mean = sum / static_cast<double>(members.size());
        double sq = 0.0;
        for (const auto* s : members) {
            double d = static_cast<double>(stat_values(*s)[m]) - mean;
            sq += d * d;
        }
        double sd = members.size() > 1
                        ? std::sqrt(sq / static_cast<double>(members.size() - 1))
                        : 0.0;
        group.measures[m] = MeanSd{mean, sd, group.count};
    }
    return group;
}

} // namespace

AggregateStats aggregate_stats(const std::vector<FrameworkStats>& stats,
                               const std::vector<std::pair<int, int>>& labels) {
    if (stats.size() != labels.size()) {
        throw std::invalid_argument("stats and labels must have equal length");
    }
    AggregateStats agg;
    if (stats.empty()) return agg;
    std::vector<const FrameworkStats*> all;
    std::array<std::vector<const FrameworkStats*>, 4> cells;
    for (size_t i = 0; i < stats.size(); ++i) {
        all.push_back(&stats[i]);
        auto cell = confusion_cell(labels[i].first, labels[i].second);
        cells[static_cast<int>(cell)].push_back(&stats[i]);
    }
    agg.all = summarize(all);
    for (int c = 0; c < 4; ++c) {
        if (!cells[c].empty()) agg.by_cell[c] = summarize(cells[c]);
    }
    return agg;
}

namespace {

std::string fixed2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

} // namespace

std::string aggregate_stats_table(const AggregateStats& agg, const std::string& title) {
    std::string out = title + "\n";
    if (agg.all.count == 0) {
        return out + "(no frameworks)\n";
    }
    out += "measurement  group   count  mean+-sd\n";
    auto emit = [&](int measure, const std::string& group_name, const StatsGroup& group) {
        std::string name = measure >= 0 ? kStatMeasureNames[measure] : "";
        out += name + std::string(13 - name.size(), ' ');
        out += group_name + std::string(8 - group_name.size(), ' ');
        std::string cnt = std::to_string(group.count);
        out += cnt + std::string(7 - cnt.size(), ' ');
        out += fixed2(group.measures[measure].mean) + "+-" +
               fixed2(group.measures[measure].sd) + "\n";
    };
    for (int m = 0; m < kStatMeasureCount; ++m) {
        emit(m, "All", agg.all);
        for (int c = 0; c < 4; ++c) {
            if (agg.by_cell[c]) {
                emit(m, confusion_cell_name(static_cast<ConfusionCell>(c)), *agg.by_cell[c]);
            }
        }
    }
    return out;
}

std::string aggregate_stats_json_text(const AggregateStats& agg) {
    json obj;
    auto group_json = [](const StatsGroup& g) {
        json entry;
        entry["count"] = g.count;
        for (int m = 0; m < kStatMeasureCount; ++m) {
            entry[kStatMeasureNames[m]] = {{"mean", g.measures[m].mean},
                                           {"sd", g.measures[m].sd}};
        }
        return entry;
    };
    obj["all"] = agg.all.count > 0 ? group_json(agg.all) : json(nullptr);
    for (int c = 0; c < 4; ++c) {
        std::string name = confusion_cell_name(static_cast<ConfusionCell>(c));
        obj[name] = agg.by_cell[c] ? group_json(*agg.by_cell[c]) : json(nullptr);
    }
    return obj.dump(2);
}

SufficiencyResult sufficiency_min_k(int target, const Qbafc& fw, const StrengthMap& s) {
    if (!fw.post_processed) {
        throw std::invalid_argument("sufficiency needs a post-processed framework");
    }
    if (target < 0 || target >= static_cast<int>(fw.size())) {
        throw std::invalid_argument("target argument is not in the framework");
    }
    std::vector<int> nu = fw.out_degrees();
    auto attackers = fw.attackers_of();
    auto supporters = fw.supporters_of();
    double base = fw.arguments[target].tau;
    for (int b : attackers[target]) base -= s[b] / nu[b];

    std::vector<double> contributions;
    for (int b : supporters[target]) contributions.push_back(s[b] / nu[b]);
    std::sort(contributions.rbegin(), contributions.rend());

    SufficiencyResult result;
    result.argument_id = fw.arguments[target].id();
    double acc = base;
    if (acc > 0.0) {
        result.min_k = 0;
        return result;
    }
    for (size_t k = 0; k < contributions.size(); ++k) {
        acc += contributions[k];
        if (acc > 0.0) {
            result.min_k = static_cast<int>(k + 1);
            return result;
        }
    }
    return result; // unreachable
}

TargetKind target_kind_from_name(const std::string& name) {
    if (name == "default") return TargetKind::Default;
    if (name == "intermediate") return TargetKind::Intermediate;
    throw std::invalid_argument("unknown target kind '" + name + "'");
}

FlipFilter flip_filter_from_name(const std::string& name) {
    if (name == "all") return FlipFilter::All;
    if (name == "flipped") return FlipFilter::Flipped;
    if (name == "not_flipped") return FlipFilter::NotFlipped;
    throw std::invalid_argument("unknown flip filter '" + name + "'");
}

std::vector<std::pair<int, double>> sufficiency_curve(
    const std::vector<PostFramework>& cases, TargetKind kind, FlipFilter filter) {
    std::vector<std::optional<int>> min_ks;
    size_t max_supporters = 0;
    for (const auto& c : cases) {
        auto supporters = c.fw.supporters_of();
        auto attackers = c.fw.attackers_of();
        int delta = c.fw.delta_index();
        for (size_t a = 0; a < c.fw.size(); ++a) {
            int idx = static_cast<int>(a);
            if (kind == TargetKind::Default) {
                if (idx != delta) continue;
            } else {
                if (idx == delta) continue;
                if (supporters[a].empty() && attackers[a].empty()) continue;
            }
            if (filter == FlipFilter::Flipped && !c.flipped[a]) continue;
            if (filter == FlipFilter::NotFlipped && c.flipped[a]) continue;
            min_ks.push_back(sufficiency_min_k(idx, c.fw, c.sigma).min_k);
            max_supporters = std::max(max_supporters, supporters[a].size());
        }
    }
    std::vector<std::pair<int, double>> curve;
    if (min_ks.empty()) return curve;
    for (int k = 0; k <= static_cast<int>(max_supporters); ++k) {
        long reached = 0;
        for (const auto& mk : min_ks) {
            if (mk && *mk <= k) ++reached;
        }
        curve.emplace_back(k, 100.0 * static_cast<double>(reached) /
                                  static_cast<double>(min_ks.size()));
    }
    return curve;
}

std::string sufficiency_curve_csv(const std::vector<std::pair<int, double>>& curve) {
    std::string out = "k,percentage\n";
    for (const auto& [k, pct] : curve) {
        out += std::to_string(k) + "," + format_double(pct) + "\n";
    }
    return out;
}

MetricsReport metrics(const std::vector<std::pair<int, int>>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("metrics need at least one pair");
    MetricsReport report;
    report.total = static_cast<long>(pairs.size());
    for (const auto& [truth, predicted] : pairs) {
        if ((truth != 0 && truth != 1) || (predicted != 0 && predicted != 1)) {
            throw std::invalid_argument("labels must be 0 or 1");
        }
        switch (confusion_cell(truth, predicted)) {
            case ConfusionCell::TP: ++report.tp; break;
            case ConfusionCell::TN: ++report.tn; break;
            case ConfusionCell::FP: ++report.fp; break;
            case ConfusionCell::FN: ++report.fn; break;
        }
    }
    report.accuracy =
        static_cast<double>(report.tp + report.tn) / static_cast<double>(report.total);

    // Per-class counts: for class c, TP_c = correct predictions of c,
    // FP_c = wrong predictions of c, FN_c = class-c examples predicted otherwise.
    auto ratio = [&report](long num, long den, bool& flagged) {
        if (den == 0) {
            flagged = true;
            report.zero_division = true;
            return 0.0;
        }
        return static_cast<double>(num) / static_cast<double>(den);
    };
    long tp_c[2] = {report.tn, report.tp};
    long fp_c[2] = {report.fn, report.fp};
    long fn_c[2] = {report.fp, report.fn};
    for (int c = 0; c < 2; ++c) {
        ClassMetrics& m = report.per_class[c];
        m.precision = ratio(tp_c[c], tp_c[c] + fp_c[c], m.zero_division);
        m.recall = ratio(tp_c[c], tp_c[c] + fn_c[c], m.zero_division);
        if (m.precision + m.recall > 0.0) {
            m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
        } else {
            m.f1 = 0.0;
            m.zero_division = true;
            report.zero_division = true;
        }
    }
    bool scratch = false;
    long micro_tp = tp_c[0] + tp_c[1];
    long micro_fp = fp_c[0] + fp_c[1];
    long micro_fn = fn_c[0] + fn_c[1];
    report.micro_precision = ratio(micro_tp, micro_tp + micro_fp, scratch);
    report.micro_recall = ratio(micro_tp, micro_tp + micro_fn, scratch);
    report.micro_f1 =
        report.micro_precision + report.micro_recall > 0.0
            ? 2.0 * report.micro_precision * report.micro_recall /
                  (report.micro_precision + report.micro_recall)
            : 0.0;
    report.macro_precision =
        (report.per_class[0].precision + report.per_class[1].precision) / 2.0;
    report.macro_recall = (report.per_class[0].recall + report.per_class[1].recall) / 2.0;
    report.macro_f1 = report.macro_precision + report.macro_recall > 0.0
                          ? 2.0 * report.macro_precision * report.macro_recall /
                                (report.macro_precision + report.macro_recall)
                          : 0.0;
    return report;
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) {
        throw std::invalid_argument("pearson needs equally long inputs");
    }
    if (xs.size() < 2) throw std::invalid_argument("pearson needs at least two points");
    double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        double dx = xs[i] - mx;
        double dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw std::invalid_argument("pearson is undefined for zero variance");
    }
    return sxy / std::sqrt(sxx * syy);
}

} // namespace argex
