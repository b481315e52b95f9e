// Acceptance suite: one pass/fail line per criterion, non-zero exit when any
// criterion fails. Build and run via ctest (test name: acceptance).

#include "argex/analysis.hpp"
#include "argex/corpus.hpp"
#include "argex/explain.hpp"
#include "argex/miner.hpp"
#include "argex/model.hpp"
#include "argex/properties.hpp"
#include "argex/qbaf.hpp"
#include "testutil.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>

using namespace argex;
using namespace argex::testutil;

namespace {

int g_failures = 0;

struct Criterion {
    int number;
    std::string title;
    std::chrono::steady_clock::time_point start;
    bool ok = true;
    std::string detail;

    Criterion(int n, std::string t)
        : number(n), title(std::move(t)), start(std::chrono::steady_clock::now()) {}

    void require(bool condition, const std::string& what) {
        if (!condition && ok) {
            ok = false;
            detail = what;
        }
    }

    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    }

    void finish(double time_limit_s = 0.0) {
        double elapsed = seconds();
        if (time_limit_s > 0.0 && elapsed > time_limit_s) {
            require(false, "exceeded time limit of " + std::to_string(time_limit_s) + " s");
        }
        if (!ok) ++g_failures;
        std::printf("%s criterion %d: %s (%.2f s)%s\n", ok ? "PASS" : "FAIL", number,
                    title.c_str(), elapsed, ok ? "" : (" -- " + detail).c_str());
        std::fflush(stdout);
    }
};

int run(const std::string& command) {
    int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string data_file(const std::string& rel) {
    return std::string(ARGEX_DATA_DIR) + "/" + rel;
}

int index_of(const Qbafc& fw, const std::string& id) {
    for (size_t i = 0; i < fw.size(); ++i) {
        if (fw.arguments[i].id() == id) return static_cast<int>(i);
    }
    return -1;
}

using EdgeSet = std::set<std::pair<std::string, std::string>>;

EdgeSet named_edges(const Qbafc& fw, bool attacks) {
    EdgeSet out;
    for (const auto& [src, dst] : attacks ? fw.attacks : fw.supports) {
        out.insert({fw.arguments[src].id(), fw.arguments[dst].id()});
    }
    return out;
}

// --- criterion 1: running-example FLX golden test ---------------------------

void criterion_1() {
    Criterion c(1, "running example: probability, class and flat contributions");
    PlrModel model = load_model(data_file("fig_example/model.json"));
    Dataset data = annotate(load_corpus(data_file("fig_example/input.jsonl")),
                            {load_lexicon(data_file("fig_example/sentiment_pos.lex"))});
    const Document& doc = data.documents.at(0);
    FeatureVector f = extract_features(model, doc);
    c.require(f == FeatureVector{1, 1, 1, 1}, "all four patterns must match");
    double p = predict_proba(model, f);
    c.require(std::abs(p - 0.5744) < 5e-5, "P(y=1) must be 0.5744 +- 5e-5");
    c.require(predicted_class(p) == 1, "predicted class must be 1");
    auto items = flx(model, doc, 4);
    c.require(items.size() == 4, "four flat contributions");
    std::vector<int> order;
    std::vector<double> values;
    for (const auto& item : items) {
        order.push_back(item.pattern_index);
        values.push_back(item.contribution);
    }
    c.require(order == std::vector<int>{2, 3, 1, 0}, "contribution order p3>p4>p2>p1");
    c.require(values == std::vector<double>{1.2, 0.5, -0.4, -0.9},
              "contributions exactly (1.2, 0.5, -0.4, -0.9)");
    c.finish(1.0);
}

// --- criterion 2: graph golden tests ----------------------------------------

void criterion_2() {
    Criterion c(2, "framework golden tests for both variants, pre and post");
    PlrModel model = load_model(data_file("fig_example/model.json"));
    Dataset data = annotate(load_corpus(data_file("fig_example/input.jsonl")),
                            {load_lexicon(data_file("fig_example/sentiment_pos.lex"))});
    const Document& doc = data.documents.at(0);

    Qbafc top = build_qbafc(model, doc, Variant::TopDown);
    c.require(top.size() == 5, "five arguments top-down");
    c.require(named_edges(top, false) == EdgeSet{{"a0", "a1"}, {"a1", "delta"}},
              "top-down support edges");
    c.require(named_edges(top, true) ==
                  EdgeSet{{"a0", "a2"}, {"a2", "delta"}, {"a3", "delta"}},
              "top-down attack edges");
    auto tau_of = [&](const Qbafc& fw, const std::string& id) {
        return fw.arguments[index_of(fw, id)].tau;
    };
    auto cls_of = [&](const Qbafc& fw, const std::string& id) {
        return fw.arguments[index_of(fw, id)].supported_class;
    };
    c.require(tau_of(top, "delta") == 0.1 && cls_of(top, "delta") == 0,
              "delta base score 0.1, class 0");
    c.require(tau_of(top, "a0") == 0.9 && cls_of(top, "a0") == 0, "a0 tau/class");
    c.require(tau_of(top, "a2") == 1.2 && cls_of(top, "a2") == 1, "a2 tau/class");

    StrengthMap ts = compute_strengths(top);
    auto sig = [&](const Qbafc& fw, const StrengthMap& s, const std::string& id) {
        return s[index_of(fw, id)];
    };
    c.require(std::abs(sig(top, ts, "a1") - 0.85) < 1e-12, "sigma(a1) = 0.85");
    c.require(std::abs(sig(top, ts, "a2") - 0.75) < 1e-12, "sigma(a2) = 0.75");
    c.require(std::abs(sig(top, ts, "delta") + 0.3) < 1e-12, "sigma(delta) = -0.3");

    Qbafc bottom = build_qbafc(model, doc, Variant::BottomUp);
    c.require(named_edges(bottom, false) == EdgeSet{{"a1", "a0"}, {"a0", "delta"}},
              "bottom-up support edges");
    c.require(named_edges(bottom, true) == EdgeSet{{"a2", "a0"}, {"a3", "delta"}},
              "bottom-up attack edges");
    StrengthMap bs = compute_strengths(bottom);
    c.require(std::abs(sig(bottom, bs, "a0") - 0.1) < 1e-12, "sigma(a0) = 0.1");
    c.require(std::abs(sig(bottom, bs, "delta") + 0.3) < 1e-12,
              "bottom-up sigma(delta) = -0.3");

    auto [top_post, tps] = postprocess(top, ts);
    c.require(cls_of(top_post, "delta") == 1 && tau_of(top_post, "delta") == -0.1,
              "post top-down delta flips to class 1 with tau -0.1");
    c.require(std::abs(sig(top_post, tps, "delta") - 0.3) < 1e-12,
              "post top-down sigma(delta) = 0.3");
    c.require(named_edges(top_post, true) == EdgeSet{{"a0", "a2"}, {"a1", "delta"}},
              "post top-down attacks relabeled");
    c.require(named_edges(top_post, false) ==
                  EdgeSet{{"a0", "a1"}, {"a2", "delta"}, {"a3", "delta"}},
              "post top-down supports relabeled");

    auto [bottom_post, bps] = postprocess(bottom, bs);
    c.require(cls_of(bottom_post, "delta") == 1 && tau_of(bottom_post, "delta") == -0.1,
              "post bottom-up delta flips");
    c.require(std::abs(sig(bottom_post, bps, "delta") - 0.3) < 1e-12,
              "post bottom-up sigma(delta) = 0.3");
    c.require(named_edges(bottom_post, true) == EdgeSet{{"a0", "delta"}, {"a2", "a0"}},
              "post bottom-up attacks relabeled");
    c.require(named_edges(bottom_post, false) == EdgeSet{{"a1", "a0"}, {"a3", "delta"}},
              "post bottom-up supports relabeled");
    c.finish();
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
