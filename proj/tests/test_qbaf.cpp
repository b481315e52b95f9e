#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "argex/qbaf.hpp"
#include "testutil.hpp"

#include <cmath>
#include <set>

using namespace argex;
using namespace argex::testutil;

namespace {

using EdgeSet = std::set<std::pair<std::string, std::string>>;

EdgeSet named_edges(const Qbafc& fw, bool attacks) {
    EdgeSet out;
    for (const auto& [src, dst] : attacks ? fw.attacks : fw.supports) {
        out.insert({fw.arguments[src].id(), fw.arguments[dst].id()});
    }
    return out;
}

int index_of(const Qbafc& fw, const std::string& id) {
    for (size_t i = 0; i < fw.size(); ++i) {
        if (fw.arguments[i].id() == id) return static_cast<int>(i);
    }
    FAIL("no argument ", id);
    return -1;
}

double sigma_of(const Qbafc& fw, const StrengthMap& s, const std::string& id) {
    return s[index_of(fw, id)];
}

} // namespace

TEST_CASE("top-down framework matches the worked example") {
    Qbafc fw = build_qbafc(fig_model(), fig_document(), Variant::TopDown);
    validate_structure(fw);
    REQUIRE(fw.size() == 5);

    // a0 = [nothing, pos], a1 = [nothing], a2 = [pos], a3 = [hot, sausages]
    CHECK(named_edges(fw, false) == EdgeSet{{"a0", "a1"}, {"a1", "delta"}});
    CHECK(named_edges(fw, true) ==
          EdgeSet{{"a0", "a2"}, {"a2", "delta"}, {"a3", "delta"}});

    int d = fw.delta_index();
    CHECK(fw.arguments[d].supported_class == 0);
    CHECK(fw.arguments[d].tau == 0.1);
    CHECK(fw.arguments[index_of(fw, "a0")].tau == 0.9);
    CHECK(fw.arguments[index_of(fw, "a0")].supported_class == 0);
    CHECK(fw.arguments[index_of(fw, "a2")].supported_class == 1);

    StrengthMap s = compute_strengths(fw);
    CHECK(std::abs(sigma_of(fw, s, "a1") - 0.85) < 1e-12);
    CHECK(std::abs(sigma_of(fw, s, "a2") - 0.75) < 1e-12);
    CHECK(std::abs(sigma_of(fw, s, "a0") - 0.9) < 1e-12);
    CHECK(std::abs(sigma_of(fw, s, "a3") - 0.5) < 1e-12);
    CHECK(std::abs(sigma_of(fw, s, "delta") - (-0.3)) < 1e-12);
}

TEST_CASE("bottom-up framework matches the worked example") {
    Qbafc fw = build_qbafc(fig_model(), fig_document(), Variant::BottomUp);
    validate_structure(fw);
    CHECK(named_edges(fw, false) == EdgeSet{{"a1", "a0"}, {"a0", "delta"}});
    CHECK(named_edges(fw, true) == EdgeSet{{"a2", "a0"}, {"a3", "delta"}});

    StrengthMap s = compute_strengths(fw);
    CHECK(std::abs(sigma_of(fw, s, "a0") - 0.1) < 1e-12);
    CHECK(std::abs(sigma_of(fw, s, "a1") - 0.4) < 1e-12);
    CHECK(std::abs(sigma_of(fw, s, "a2") - 1.2) < 1e-12);
    CHECK(std::abs(sigma_of(fw, s, "delta") - (-0.3)) < 1e-12);
}

TEST_CASE("a document matching nothing yields the default-only framework") {
    Document doc = annotate(make_document("d", {"unrelated", "words"}),
                            {sentiment_pos_lexicon()});
    Qbafc fw = build_qbafc(fig_model(), doc, Variant::TopDown);
    CHECK(fw.size() == 1);
    CHECK(fw.arguments[0].is_default());
    CHECK(fw.attacks.empty());
    CHECK(fw.supports.empty());
    StrengthMap s = compute_strengths(fw);
    CHECK(s[0] == fw.arguments[0].tau);
}

TEST_CASE("post-processing the top-down example flips delta") {
    Qbafc fw = build_qbafc(fig_model(), fig_document(), Variant::TopDown);
    StrengthMap s = compute_strengths(fw);
    auto [post, ps] = postprocess(fw, s);
    validate_structure(post);
    int d = post.delta_index();
    CHECK(post.arguments[d].supported_class == 1);
    CHECK(post.arguments[d].tau == -0.1);
    CHECK(std::abs(ps[d] - 0.3) < 1e-12);
    CHECK(named_edges(post, true) == EdgeSet{{"a0", "a2"}, {"a1", "delta"}});
    CHECK(named_edges(post, false) ==
          EdgeSet{{"a0", "a1"}, {"a2", "delta"}, {"a3", "delta"}});
    // non-delta arguments unchanged
    for (const auto& id : {"a0", "a1", "a2", "a3"}) {
        CHECK(std::abs(sigma_of(post, ps, id) - sigma_of(fw, s, id)) == 0.0);
    }
}

TEST_CASE("post-processing the bottom-up example flips delta") {
    Qbafc fw = build_qbafc(fig_model(), fig_document(), Variant::BottomUp);
    StrengthMap s = compute_strengths(fw);
    auto [post, ps] = postprocess(fw, s);
    validate_structure(post);
    CHECK(named_edges(post, true) == EdgeSet{{"a2", "a0"}, {"a0", "delta"}});
    CHECK(named_edges(post, false) == EdgeSet{{"a1", "a0"}, {"a3", "delta"}});
    CHECK(std::abs(sigma_of(post, ps, "delta") - 0.3) < 1e-12);
    CHECK(std::abs(sigma_of(post, ps, "a0") - 0.1) < 1e-12);
}

TEST_CASE("identity post-processing when no strength is negative") {
    Qbafc fw;
    Argument delta;
    delta.pattern_index = -1;
    delta.tau = 0.7;
    delta.supported_class = 1;
    fw.arguments.push_back(delta);
    StrengthMap s = compute_strengths(fw);
    CHECK(s[0] == 0.7);
    auto [post, ps] = postprocess(fw, s);
    CHECK(post.arguments[0].tau == 0.7);
    CHECK(post.arguments[0].supported_class == 1);
    CHECK(ps[0] == 0.7);
}

TEST_CASE("exact-zero sources lose their edges during post-processing") {
    // a0 (tau 0.5, class 1) attacked by a1 (tau 0.5, class 0) supported by
    // nothing; a1 attacked by a2 with tau 0.5 making sigma(a1) = 0 exactly.
    Qbafc fw;
    fw.arguments.push_back(Argument{0, 0.5, 1});
    fw.arguments.push_back(Argument{1, 0.5, 0});
    fw.arguments.push_back(Argument{2, 0.5, 1});
    Argument delta;
    delta.pattern_index = -1;
    delta.tau = 0.25;
    delta.supported_class = 1;
    fw.arguments.push_back(delta);
    fw.attacks = {{1, 0}, {2, 1}};
    fw.supports = {{0, 3}};
    fw.sort_edges();
    validate_structure(fw);
    StrengthMap s = compute_strengths(fw);
    CHECK(s[1] == 0.0);
    auto [post, ps] = postprocess(fw, s);
    // a1's outgoing attack must be gone; a2's attack on a1 survives.
    CHECK(named_edges(post, true) == EdgeSet{{"a2", "a1"}});
    CHECK(ps[0] == 0.5); // target's strength no longer perturbed (was 0.5 anyway)
    CHECK(std::abs(ps[3] - (0.25 + 0.5)) < 1e-12);
}

TEST_CASE("inferred prediction follows the default argument") {
    PlrModel model = fig_model();
    Document doc = fig_document();
    SUBCASE("pre-processing, negative delta strength") {
        Qbafc fw = build_qbafc(model, doc, Variant::TopDown);
        StrengthMap s = compute_strengths(fw);
        Prediction pred = inferred_prediction(fw, s);
        CHECK(pred.predicted_class == 1);
        CHECK(std::abs(pred.probability - 0.5744) < 5e-5);
    }
    SUBCASE("post-processing, positive delta strength") {
        Qbafc fw = build_qbafc(model, doc, Variant::BottomUp);
        StrengthMap s = compute_strengths(fw);
        auto [post, ps] = postprocess(fw, s);
        Prediction pred = inferred_prediction(post, ps);
        CHECK(pred.predicted_class == 1);
        CHECK(std::abs(pred.probability - 0.5744) < 5e-5);
    }
    SUBCASE("zero strength ties to class 1") {
        Qbafc fw;
        Argument delta;
        delta.pattern_index = -1;
        delta.tau = 0.0;
        delta.supported_class = 0;
        fw.arguments.push_back(delta);
        StrengthMap s = compute_strengths(fw);
        Prediction pred = inferred_prediction(fw, s);
        CHECK(pred.predicted_class == 1);
        CHECK(pred.probability == 0.5);
    }
}

TEST_CASE("faithfulness and structure on random models") {
    Rng rng(47);
    for (int trial = 0; trial < 300; ++trial) {
        PlrModel model = random_model(rng, 5, 8);
        Document doc = random_document(rng, 5, 0, 10);
        FeatureVector f = extract_features(model, doc);
        double p1 = predict_proba(model, f);
        for (Variant variant : {Variant::TopDown, Variant::BottomUp}) {
            Qbafc fw = build_qbafc(model, doc, variant);
            validate_structure(fw);
            StrengthMap s = compute_strengths(fw);
            int d = fw.delta_index();
            double p_delta_class =
                fw.arguments[d].supported_class == 1 ? p1 : 1.0 - p1;
            CHECK(std::abs(sigmoid(s[d]) - p_delta_class) < 1e-9);
            CHECK(inferred_prediction(fw, s).predicted_class == predicted_class(p1));

            auto [post, ps] = postprocess(fw, s);
            validate_structure(post);
            for (size_t i = 0; i < fw.size(); ++i) {
                CHECK(std::abs(ps[i] - std::abs(s[i])) < 1e-12);
                CHECK(ps[i] >= 0.0);
            }
            CHECK(inferred_prediction(post, ps).predicted_class == predicted_class(p1));
        }
    }
}

TEST_CASE("both variants share arguments and reverse non-delta edges") {
    Rng rng(53);
    for (int trial = 0; trial < 200; ++trial) {
        PlrModel model = random_model(rng, 4, 8);
        Document doc = random_document(rng, 4, 0, 10);
        Qbafc top = build_qbafc(model, doc, Variant::TopDown);
        Qbafc bottom = build_qbafc(model, doc, Variant::BottomUp);
        REQUIRE(top.size() == bottom.size());
        for (size_t i = 0; i < top.size(); ++i) {
            CHECK(top.arguments[i].id() == bottom.arguments[i].id());
            CHECK(top.arguments[i].tau == bottom.arguments[i].tau);
            CHECK(top.arguments[i].supported_class == bottom.arguments[i].supported_class);
        }
        auto non_delta = [](const Qbafc& fw) {
            EdgeSet out;
            int d = fw.delta_index();
            for (const auto& edges : {fw.attacks, fw.supports}) {
                for (const auto& [src, dst] : edges) {
                    if (dst != d) {
                        out.insert({fw.arguments[src].id(), fw.arguments[dst].id()});
                    }
                }
            }
            return out;
        };
        EdgeSet top_edges = non_delta(top);
        EdgeSet reversed;
        for (const auto& [a, b] : non_delta(bottom)) reversed.insert({b, a});
        CHECK(top_edges == reversed);
    }
}

TEST_CASE("compute_strengths rejects cyclic graphs") {
    Qbafc fw;
    fw.arguments.push_back(Argument{0, 0.5, 1});
    fw.arguments.push_back(Argument{1, 0.5, 1});
    Argument delta;
    delta.pattern_index = -1;
    delta.supported_class = 1;
    fw.arguments.push_back(delta);
    fw.supports = {{0, 1}, {1, 0}};
    CHECK_THROWS_AS(compute_strengths(fw), std::logic_error);
    CHECK_THROWS_AS(validate_structure(fw), std::logic_error);
}

TEST_CASE("framework json round-trip") {
    Qbafc fw = build_qbafc(fig_model(), fig_document(), Variant::TopDown);
    StrengthMap s = compute_strengths(fw);
    std::string text = qbafc_to_json_text(fw, &s);
    StrengthMap s2;
    Qbafc back = qbafc_from_json_text(text, &s2);
    CHECK(back.variant == fw.variant);
    CHECK(back.post_processed == fw.post_processed);
    REQUIRE(back.size() == fw.size());
    for (size_t i = 0; i < fw.size(); ++i) {
        CHECK(back.arguments[i].id() == fw.arguments[i].id());
        CHECK(back.arguments[i].tau == fw.arguments[i].tau);
        CHECK(back.arguments[i].supported_class == fw.arguments[i].supported_class);
        CHECK(s2[i] == s[i]);
    }
    CHECK(back.attacks == fw.attacks);
    CHECK(back.supports == fw.supports);
}

TEST_CASE("dot export is deterministic and matches the figure conventions") {
    Qbafc fw = build_qbafc(fig_model(), fig_document(), Variant::TopDown);
    StrengthMap s = compute_strengths(fw);
    std::string dot1 = qbafc_to_dot(fw, &s);
    std::string dot2 = qbafc_to_dot(fw, &s);
    CHECK(dot1 == dot2);
    CHECK(dot1.find("\"a2\" -> \"delta\" [label=\"-\"]") != std::string::npos);
    CHECK(dot1.find("\"a1\" -> \"delta\" [label=\"+\"]") != std::string::npos);
    CHECK(dot1.find("palegreen") != std::string::npos);
    CHECK(dot1.find("lightcoral") != std::string::npos);
}
