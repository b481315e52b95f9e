#include "argex/properties.hpp"
#include "argex/text.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace argex {

using nlohmann::json;

bool set_leq(const std::vector<int>& p, const std::vector<int>& q, const StrengthMap& s) {
    if (p.size() > q.size()) return false;
    std::vector<double> ps, qs;
    ps.reserve(p.size());
    qs.reserve(q.size());
    for (int a : p) ps.push_back(s[a]);
    for (int a : q) qs.push_back(s[a]);
    std::sort(ps.rbegin(), ps.rend());
    std::sort(qs.rbegin(), qs.rend());
    for (size_t i = 0; i < ps.size(); ++i) {
        if (ps[i] > qs[i]) return false;
    }
    return true;
}

bool set_less(const std::vector<int>& p, const std::vector<int>& q, const StrengthMap& s) {
    return set_leq(p, q, s) && !set_leq(q, p, s);
}

std::string gp_verdict_name(GpVerdict v) {
    switch (v) {
        case GpVerdict::Holds: return "holds";
        case GpVerdict::Violated: return "violated";
        case GpVerdict::Vacuous: return "vacuous";
    }
    return "?";
}

namespace {

struct GpContext {
    const Qbafc& fw;
    const StrengthMap& s;
    std::vector<std::vector<int>> att;
    std::vector<std::vector<int>> supp;

    GpContext(const Qbafc& f, const StrengthMap& sigma)
        : fw(f), s(sigma), att(f.attackers_of()), supp(f.supporters_of()) {}

    double tau(int a) const { return fw.arguments[a].tau; }
    double sigma(int a) const { return s[a]; }
};

bool strict_subset(const std::vector<int>& a, const std::vector<int>& b) {
    return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Returns (antecedent, consequent) of the property for one argument.
std::pair<bool, bool> eval_unary(const GpContext& ctx, int gp, int a) {
    bool no_att = ctx.att[a].empty();
    bool no_supp = ctx.supp[a].empty();
    switch (gp) {
        case 1: return {no_att && no_supp, ctx.sigma(a) == ctx.tau(a)};
        case 2: return {!no_att && no_supp, ctx.sigma(a) < ctx.tau(a)};
        case 3: return {no_att && !no_supp, ctx.sigma(a) > ctx.tau(a)};
        case 4: return {ctx.sigma(a) < ctx.tau(a), !no_att};
        case 5: return {ctx.sigma(a) > ctx.tau(a), !no_supp};
        default: throw std::invalid_argument("not a unary property");
    }
}

std::pair<bool, bool> eval_pair(const GpContext& ctx, int gp, int a, int b) {
    const auto& ra = ctx.att[a];
    const auto& rb = ctx.att[b];
    const auto& pa = ctx.supp[a];
    const auto& pb = ctx.supp[b];
    bool tau_eq = ctx.tau(a) == ctx.tau(b);
    switch (gp) {
        case 6:
            return {ra == rb && pa == pb && tau_eq, ctx.sigma(a) == ctx.sigma(b)};
        case 7:
            return {strict_subset(ra, rb) && pa == pb && tau_eq,
                    ctx.sigma(a) > ctx.sigma(b)};
        case 8:
            return {ra == rb && strict_subset(pa, pb) && tau_eq,
                    ctx.sigma(a) < ctx.sigma(b)};
        case 9:
            return {ra == rb && pa == pb && ctx.tau(a) < ctx.tau(b),
                    ctx.sigma(a) < ctx.sigma(b)};
        case 10:
            return {set_less(ra, rb, ctx.s) && pa == pb && tau_eq,
                    ctx.sigma(a) > ctx.sigma(b)};
        case 11:
            return {ra == rb && set_less(pa, pb, ctx.s) && tau_eq,
                    ctx.sigma(a) < ctx.sigma(b)};
        default: throw std::invalid_argument("not a pairwise property");
    }
}

} // namespace

GpReport check_gp(const Qbafc& fw, const StrengthMap& s, int gp) {
    if (gp < 1 || gp > 11) {
        throw std::invalid_argument("unknown group property GP" + std::to_string(gp));
    }
    if (s.size() != fw.size()) {
        throw std::invalid_argument("strength map does not match framework");
    }
    GpContext ctx(fw, s);
    GpReport report;
    report.gp = gp;
    int n = static_cast<int>(fw.size());
    if (gp <= 5) {
        for (int a = 0; a < n; ++a) {
            auto [antecedent, consequent] = eval_unary(ctx, gp, a);
            if (!antecedent) continue;
            ++report.instances;
            if (!consequent) report.violations.push_back(GpWitness{a, -1});
        }
    } else {
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                if (a == b) continue;
                auto [antecedent, consequent] = eval_pair(ctx, gp, a, b);
                if (!antecedent) continue;
                ++report.instances;
                if (!consequent) report.violations.push_back(GpWitness{a, b});
            }
        }
    }
    if (report.instances == 0) {
        report.verdict = GpVerdict::Vacuous;
    } else {
        report.verdict = report.violations.empty() ? GpVerdict::Holds : GpVerdict::Violated;
    }
    return report;
}

bool witness_violates(const Qbafc& fw, const StrengthMap& s, int gp, const GpWitness& w) {
    GpContext ctx(fw, s);
    if (gp >= 1 && gp <= 5) {
        auto [antecedent, consequent] = eval_unary(ctx, gp, w.arg_a);
        return antecedent && !consequent;
    }
    if (gp >= 6 && gp <= 11) {
        auto [antecedent, consequent] = eval_pair(ctx, gp, w.arg_a, w.arg_b);
        return antecedent && !consequent;
    }
    throw std::invalid_argument("unknown group property GP" + std::to_string(gp));
}

Qbafc random_qbafc(const RandomFrameworkSpec& spec, Rng& rng) {
    if (spec.min_arguments < 1 || spec.max_arguments < spec.min_arguments) {
        throw std::invalid_argument("bad argument count range");
    }
    int n = static_cast<int>(rng.next_int(spec.min_arguments, spec.max_arguments));
    Qbafc fw;
    auto draw_tau = [&]() {
        double t = rng.next_real(spec.tau_min, spec.tau_max);
        if (spec.grid_base_scores) t = std::round(t * 16.0) / 16.0;
        return std::abs(t);
    };
    for (int i = 0; i < n; ++i) {
        Argument arg;
        arg.pattern_index = i;
        arg.tau = draw_tau();
        arg.supported_class = rng.next_bool(spec.class1_probability) ? 1 : 0;
        fw.arguments.push_back(arg);
    }
    Argument delta;
    delta.pattern_index = -1;
    delta.tau = draw_tau();
    delta.supported_class = rng.next_bool(spec.class1_probability) ? 1 : 0;
    fw.arguments.push_back(delta);
    int delta_pos = n;

    auto add_edge = [&](int src, int dst) {
        bool same = fw.arguments[src].supported_class == fw.arguments[dst].supported_class;
        (same ? fw.supports : fw.attacks).emplace_back(src, dst);
    };
    // Like the extracted frameworks, a source points either at earlier
    // arguments or, when it has none, at the default argument.
    for (int i = 0; i < n; ++i) {
        bool any = false;
        for (int j = 0; j < i; ++j) {
            if (rng.next_bool(spec.edge_density)) {
                add_edge(i, j);
                any = true;
            }
        }
        if (!any) add_edge(i, delta_pos);
    }
    fw.sort_edges();
    return fw;
}

GpSummary gp_summary(const RandomFrameworkSpec& spec, long trials) {
    if (trials < 0) throw std::invalid_argument("trials must be >= 0");
    GpSummary summary;
    summary.spec = spec;
    summary.trials = trials;
    Rng rng(spec.seed);
    for (long t = 0; t < trials; ++t) {
        Qbafc fw = random_qbafc(spec, rng);
        StrengthMap sigma = compute_strengths(fw);
        auto [post_fw, post_sigma] = postprocess(fw, sigma);
        for (int gp = 1; gp <= 11; ++gp) {
            GpReport pre_report = check_gp(fw, sigma, gp);
            GpReport post_report = check_gp(post_fw, post_sigma, gp);
            auto record = [&](GpStageResult& result, const GpReport& report,
                              const Qbafc& frame) {
                result.instances += report.instances;
                result.violation_count += static_cast<long>(report.violations.size());
                if (!report.violations.empty()) {
                    ++result.frameworks_violating;
                    if (result.first_trial < 0) {
                        result.first_trial = static_cast<int>(t);
                        const auto& w = report.violations.front();
                        result.first_witness = frame.arguments[w.arg_a].id();
                        if (w.arg_b >= 0) {
                            result.first_witness =
                                "(" + result.first_witness + "," +
                                frame.arguments[w.arg_b].id() + ")";
                        }
                    }
                }
            };
            record(summary.pre[gp], pre_report, fw);
            record(summary.post[gp], post_report, post_fw);
        }
    }
    return summary;
}

std::string gp_summary_table(const GpSummary& summary) {
    auto mark = [](const GpStageResult& r) {
        switch (r.verdict()) {
            case GpVerdict::Holds: return std::string("yes");
            case GpVerdict::Violated: return std::string("NO");
            case GpVerdict::Vacuous: return std::string("-");
        }
        return std::string("?");
    };
    std::string out = "Satisfaction of the group properties over " +
                      std::to_string(summary.trials) + " random frameworks\n";
    out += "framework            ";
    for (int gp = 1; gp <= 11; ++gp) {
        std::string head = "GP" + std::to_string(gp);
        out += head + std::string(6 - head.size(), ' ');
    }
    out += "\n";
    auto row = [&](const std::string& name, const std::array<GpStageResult, 12>& res) {
        std::string line = name + std::string(21 - name.size(), ' ');
        for (int gp = 1; gp <= 11; ++gp) {
            std::string cell = mark(res[gp]);
            line += cell + std::string(6 - cell.size(), ' ');
        }
        return line + "\n";
    };
    out += row("<QBAFc, sigma>", summary.pre);
    out += row("<QBAFc', sigma>", summary.post);
    return out;
}

std::string gp_summary_json_text(const GpSummary& summary) {
    json obj;
    obj["trials"] = summary.trials;
    obj["seed"] = summary.spec.seed;
    auto stage_json = [](const std::array<GpStageResult, 12>& res) {
        json arr = json::array();
        for (int gp = 1; gp <= 11; ++gp) {
            const auto& r = res[gp];
            json entry;
            entry["gp"] = gp;
            entry["verdict"] = gp_verdict_name(r.verdict());
            entry["violations"] = r.violation_count;
            entry["instances"] = r.instances;
            entry["frameworks_violating"] = r.frameworks_violating;
            if (r.first_trial >= 0) {
                entry["first_violation"] = {{"trial", r.first_trial},
                                            {"witness", r.first_witness}};
            }
            arr.push_back(std::move(entry));
        }
        return arr;
    };
    obj["pre"] = stage_json(summary.pre);
    obj["post"] = stage_json(summary.post);
    return obj.dump(2);
}

namespace {

Qbafc remove_argument(const Qbafc& fw, int victim) {
    Qbafc out;
    out.variant = fw.variant;
    out.post_processed = fw.post_processed;
    std::vector<int> remap(fw.size(), -1);
    for (size_t i = 0; i < fw.size(); ++i) {
        if (static_cast<int>(i) == victim) continue;
        remap[i] = static_cast<int>(out.arguments.size());
        out.arguments.push_back(fw.arguments[i]);
    }
    auto copy_edges = [&](const std::vector<std::pair<int, int>>& src,
                          std::vector<std::pair<int, int>>& dst) {
        for (const auto& [a, b] : src) {
            if (a == victim || b == victim) continue;
            dst.emplace_back(remap[a], remap[b]);
        }
    };
    copy_edges(fw.attacks, out.attacks);
    copy_edges(fw.supports, out.supports);
    out.sort_edges();
    return out;
}

std::optional<GpWitness> first_violation(const Qbafc& pre, int gp, Stage stage,
                                         Qbafc* checked_out, StrengthMap* sigma_out) {
    StrengthMap sigma = compute_strengths(pre);
    const Qbafc* checked = &pre;
    Qbafc post_fw;
    StrengthMap post_sigma;
    if (stage == Stage::Post) {
        std::tie(post_fw, post_sigma) = postprocess(pre, sigma);
        checked = &post_fw;
        sigma = post_sigma;
    }
    GpReport report = check_gp(*checked, sigma, gp);
    if (report.violations.empty()) return std::nullopt;
    if (checked_out) *checked_out = *checked;
    if (sigma_out) *sigma_out = sigma;
    return report.violations.front();
}

} // namespace

std::optional<Counterexample> counterexample_search(int gp, Stage stage,
                                                    const RandomFrameworkSpec& spec,
                                                    long budget) {
    if (budget <= 0) throw std::invalid_argument("budget must be positive");
    Rng rng(spec.seed);
    for (long attempt = 0; attempt < budget; ++attempt) {
        Qbafc candidate = random_qbafc(spec, rng);
        if (!first_violation(candidate, gp, stage, nullptr, nullptr)) continue;
        // Greedy pruning: drop arguments while the violation survives.
        bool shrunk = true;
        while (shrunk) {
            shrunk = false;
            for (size_t i = 0; i < candidate.size(); ++i) {
                if (candidate.arguments[i].is_default()) continue;
                Qbafc reduced = remove_argument(candidate, static_cast<int>(i));
                if (first_violation(reduced, gp, stage, nullptr, nullptr)) {
                    candidate = std::move(reduced);
                    shrunk = true;
                    break;
                }
            }
        }
        Counterexample result;
        result.generated = candidate;
        auto witness =
            first_violation(candidate, gp, stage, &result.checked, &result.strengths);
        result.witness = *witness;
        return result;
    }
    return std::nullopt;
}

} // namespace argex
