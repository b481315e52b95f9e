#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "argex/analysis.hpp"
#include "argex/properties.hpp"
#include "testutil.hpp"

#include <cmath>

using namespace argex;
using namespace argex::testutil;

TEST_CASE("framework stats on the worked example") {
    Qbafc fw = build_qbafc(fig_model(), fig_document(), Variant::TopDown);
    FrameworkStats stats = framework_stats(fw);
    CHECK(stats.n_arguments == 5);
    CHECK(stats.n_class1 == 2);
    CHECK(stats.n_class0 == 3);
    CHECK(stats.n_relations == 5);
    CHECK(stats.n_relations_non_delta == 2);
    CHECK(stats.n_attacks == 3);
    CHECK(stats.n_supports == 2);

    StrengthMap s = compute_strengths(fw);
    auto [post, ps] = postprocess(fw, s);
    FrameworkStats post_stats = framework_stats(post);
    CHECK(post_stats.n_relations == 5);
    CHECK(post_stats.n_attacks == 2);
    CHECK(post_stats.n_supports == 3);
    CHECK(post_stats.n_class1 == 3); // delta flipped
}

TEST_CASE("framework stats identities hold on random frameworks") {
    RandomFrameworkSpec spec;
    spec.seed = 73;
    Rng rng(spec.seed);
    for (int trial = 0; trial < 200; ++trial) {
        Qbafc fw = random_qbafc(spec, rng);
        StrengthMap s = compute_strengths(fw);
        auto [post, ps] = postprocess(fw, s);
        for (const Qbafc* f : {&fw, &post}) {
            FrameworkStats stats = framework_stats(*f);
            CHECK(stats.n_class0 + stats.n_class1 == stats.n_arguments);
            CHECK(stats.n_attacks + stats.n_supports == stats.n_relations);
            CHECK(stats.n_relations_non_delta <= stats.n_relations);
        }
    }
}

TEST_CASE("stats of a default-only framework") {
    Qbafc fw;
    Argument delta;
    delta.pattern_index = -1;
    delta.tau = 1.0;
    delta.supported_class = 0;
    fw.arguments.push_back(delta);
    FrameworkStats stats = framework_stats(fw);
    CHECK(stats.n_arguments == 1);
    CHECK(stats.n_relations == 0);
    CHECK(stats.n_relations_non_delta == 0);
}

TEST_CASE("aggregate stats") {
    FrameworkStats a;
    a.n_arguments = 4;
    FrameworkStats b;
    b.n_arguments = 6;
    SUBCASE("singleton group has sd zero") {
        AggregateStats agg = aggregate_stats({a}, {{1, 1}});
        CHECK(agg.all.count == 1);
        CHECK(agg.all.measures[0].mean == 4.0);
        CHECK(agg.all.measures[0].sd == 0.0);
        CHECK(agg.by_cell[static_cast<int>(ConfusionCell::TP)].has_value());
        CHECK_FALSE(agg.by_cell[static_cast<int>(ConfusionCell::FP)].has_value());
    }
    SUBCASE("two members use the n-1 denominator") {
        AggregateStats agg = aggregate_stats({a, b}, {{1, 1}, {0, 0}});
        CHECK(agg.all.measures[0].mean == 5.0);
        CHECK(agg.all.measures[0].sd == doctest::Approx(std::sqrt(2.0)));
    }
    SUBCASE("empty input gives an empty report") {
        AggregateStats agg = aggregate_stats({}, {});
        CHECK(agg.all.count == 0);
        for (int c = 0; c < 4; ++c) CHECK_FALSE(agg.by_cell[c].has_value());
    }
}

TEST_CASE("confusion cells") {
    CHECK(confusion_cell(1, 1) == ConfusionCell::TP);
    CHECK(confusion_cell(0, 0) == ConfusionCell::TN);
    CHECK(confusion_cell(0, 1) == ConfusionCell::FP);
    CHECK(confusion_cell(1, 0) == ConfusionCell::FN);
}

TEST_CASE("sufficiency on the bottom-up example") {
    Qbafc fw = build_qbafc(fig_model(), fig_document(), Variant::BottomUp);
    StrengthMap s = compute_strengths(fw);
    auto [post, ps] = postprocess(fw, s);
    auto result = sufficiency_min_k(post.delta_index(), post, ps);
    CHECK(result.argument_id == "delta");
    REQUIRE(result.min_k.has_value());
    CHECK(*result.min_k == 1); // -0.1 - 0.1 + 0.5 = 0.3 > 0
}

TEST_CASE("sufficiency edge cases") {
    auto single = [](double tau, int cls) {
        Qbafc fw;
        Argument delta;
        delta.pattern_index = -1;
        delta.tau = tau;
        delta.supported_class = cls;
        fw.arguments.push_back(delta);
        fw.post_processed = true;
        return fw;
    };
    SUBCASE("base score alone suffices") {
        Qbafc fw = single(1.0, 1);
        StrengthMap s = compute_strengths(fw);
        CHECK(sufficiency_min_k(0, fw, s).min_k == 0);
    }
    SUBCASE("unreachable without supporters") {
        Qbafc fw = single(-1.0, 1); // post-processed tau may be negative
        StrengthMap s = compute_strengths(fw);
        CHECK_FALSE(sufficiency_min_k(0, fw, s).min_k.has_value());
    }
    SUBCASE("ties count as insufficient") {
        Qbafc fw = single(0.0, 1);
        StrengthMap s = compute_strengths(fw);
        CHECK_FALSE(sufficiency_min_k(0, fw, s).min_k.has_value());
    }
    SUBCASE("pre-processed frameworks are rejected") {
        Qbafc fw = single(1.0, 1);
        fw.post_processed = false;
        StrengthMap s = compute_strengths(fw);
        CHECK_THROWS(sufficiency_min_k(0, fw, s));
        fw.post_processed = true;
        CHECK_THROWS(sufficiency_min_k(5, fw, compute_strengths(fw)));
    }
}

TEST_CASE("greedy sufficiency equals subset enumeration") {
    RandomFrameworkSpec spec;
    spec.seed = 79;
    spec.min_arguments = 4;
    spec.max_arguments = 12;
    spec.edge_density = 0.3;
    Rng rng(spec.seed);
    long compared = 0;
    for (int trial = 0; trial < 300; ++trial) {
        Qbafc fw = random_qbafc(spec, rng);
        StrengthMap s = compute_strengths(fw);
        auto [post, ps] = postprocess(fw, s);
        for (size_t target = 0; target < post.size(); ++target) {
            if (post.supporters_of()[target].size() > 12) continue;
            auto greedy = sufficiency_min_k(static_cast<int>(target), post, ps);
            int oracle = oracle_min_k(static_cast<int>(target), post, ps);
            ++compared;
            if (oracle < 0) {
                CHECK_FALSE(greedy.min_k.has_value());
            } else {
                REQUIRE(greedy.min_k.has_value());
                CHECK(*greedy.min_k == oracle);
            }
        }
    }
    CHECK(compared > 500);
}

TEST_CASE("sufficiency curves") {
    Qbafc fw = build_qbafc(fig_model(), fig_document(), Variant::BottomUp);
    StrengthMap s = compute_strengths(fw);
    auto [post, ps] = postprocess(fw, s);
    PostFramework pf{post, ps, flipped_classes(s)};

    SUBCASE("default curve from the example") {
        auto curve = sufficiency_curve({pf}, TargetKind::Default, FlipFilter::All);
        REQUIRE(curve.size() == 2); // k = 0, 1 (delta has one supporter)
        CHECK(curve[0] == std::pair<int, double>{0, 0.0});
        CHECK(curve[1] == std::pair<int, double>{1, 100.0});
    }
    SUBCASE("flip filter selects delta only when flipped") {
        CHECK(sufficiency_curve({pf}, TargetKind::Default, FlipFilter::NotFlipped)
                  .empty());
        CHECK_FALSE(
            sufficiency_curve({pf}, TargetKind::Default, FlipFilter::Flipped).empty());
    }
    SUBCASE("intermediate arguments exclude delta and leaves") {
        auto curve = sufficiency_curve({pf}, TargetKind::Intermediate, FlipFilter::All);
        REQUIRE(!curve.empty()); // a0 has relations
    }
    SUBCASE("empty input gives an empty curve") {
        CHECK(sufficiency_curve({}, TargetKind::Default, FlipFilter::All).empty());
    }
}

TEST_CASE("sufficiency curves are monotone") {
    RandomFrameworkSpec spec;
    spec.seed = 83;
    Rng rng(spec.seed);
    std::vector<PostFramework> cases;
    for (int i = 0; i < 40; ++i) {
        Qbafc fw = random_qbafc(spec, rng);
        StrengthMap s = compute_strengths(fw);
        auto [post, ps] = postprocess(fw, s);
        cases.push_back(PostFramework{std::move(post), std::move(ps), flipped_classes(s)});
    }
    for (TargetKind kind : {TargetKind::Default, TargetKind::Intermediate}) {
        for (FlipFilter filter :
             {FlipFilter::All, FlipFilter::Flipped, FlipFilter::NotFlipped}) {
            auto curve = sufficiency_curve(cases, kind, filter);
            for (size_t i = 1; i < curve.size(); ++i) {
                CHECK(curve[i].second >= curve[i - 1].second);
            }
            if (!curve.empty()) {
                CHECK(curve.front().first == 0);
                CHECK(curve.back().second <= 100.0);
            }
        }
    }
}

TEST_CASE("csv emission") {
    std::vector<std::pair<int, double>> curve = {{0, 0.0}, {1, 50.0}, {2, 100.0}};
    CHECK(sufficiency_curve_csv(curve) == "k,percentage\n0,0\n1,50\n2,100\n");
}

TEST_CASE("metrics on hand-enumerated confusion tables") {
    SUBCASE("perfect predictions") {
        MetricsReport r = metrics({{1, 1}, {0, 0}, {1, 1}});
        CHECK(r.accuracy == 1.0);
        CHECK(r.per_class[0].f1 == 1.0);
        CHECK(r.per_class[1].f1 == 1.0);
        CHECK(r.macro_f1 == 1.0);
        CHECK(r.micro_f1 == 1.0);
        CHECK_FALSE(r.zero_division);
    }
    SUBCASE("TP=1, FP=1, FN=0 for class 1") {
        // one true positive, one false positive, no false negatives
        MetricsReport r = metrics({{1, 1}, {0, 1}, {0, 0}});
        CHECK(r.per_class[1].precision == 0.5);
        CHECK(r.per_class[1].recall == 1.0);
        CHECK(r.per_class[1].f1 == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("constant class-1 predictor on a balanced set of four") {
        MetricsReport r = metrics({{1, 1}, {1, 1}, {0, 1}, {0, 1}});
        CHECK(r.accuracy == 0.5);
        CHECK(r.per_class[1].recall == 1.0);
        CHECK(r.per_class[1].precision == 0.5);
        CHECK(r.per_class[0].zero_division); // precision_0 = 0/0
        CHECK(r.zero_division);
        CHECK(r.per_class[0].precision == 0.0);
    }
    SUBCASE("empty input is an error") { CHECK_THROWS(metrics({})); }
    SUBCASE("labels outside 0/1 are an error") { CHECK_THROWS(metrics({{2, 1}})); }
}

TEST_CASE("micro F1 equals accuracy on random binary predictions") {
    Rng rng(89);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::pair<int, int>> pairs;
        int n = static_cast<int>(rng.next_int(1, 60));
        for (int i = 0; i < n; ++i) {
            pairs.emplace_back(rng.next_bool(0.5) ? 1 : 0, rng.next_bool(0.5) ? 1 : 0);
        }
        MetricsReport r = metrics(pairs);
        CHECK(std::abs(r.micro_f1 - r.accuracy) < 1e-12);
        CHECK(r.tp + r.tn + r.fp + r.fn == r.total);
    }
}

TEST_CASE("pearson correlation") {
    std::vector<double> xs = {1.0, 2.0, 3.0};
    CHECK(pearson(xs, xs) == doctest::Approx(1.0));
    std::vector<double> neg = {-1.0, -2.0, -3.0};
    CHECK(pearson(xs, neg) == doctest::Approx(-1.0));
    std::vector<double> ys = {1.0, 2.0, 4.0};
    CHECK(std::abs(pearson(xs, ys) - 0.9820) < 1e-4);

    CHECK_THROWS(pearson({1.0}, {1.0}));
    CHECK_THROWS(pearson({1.0, 2.0}, {1.0}));
    CHECK_THROWS(pearson({1.0, 1.0}, {1.0, 2.0})); // zero variance
}
