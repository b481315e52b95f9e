#pragma once

#include "argex/qbaf.hpp"
#include "argex/rng.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace argex {

/// P <= Q iff an injective mapping f: P -> Q exists with
/// sigma(a) <= sigma(f(a)) for every a in P.
bool set_leq(const std::vector<int>& p, const std::vector<int>& q, const StrengthMap& s);
/// P < Q iff P <= Q and not Q <= P.
bool set_less(const std::vector<int>& p, const std::vector<int>& q, const StrengthMap& s);

enum class GpVerdict { Holds, Violated, Vacuous };

std::string gp_verdict_name(GpVerdict v);

struct GpWitness {
    int arg_a = -1;
    int arg_b = -1; // -1 for the single-argument properties
};

struct GpReport {
    int gp = 0;
    GpVerdict verdict = GpVerdict::Vacuous;
    long instances = 0; // antecedent-true instances examined
    std::vector<GpWitness> violations;
};

/// Evaluates one of the eleven group properties over all arguments (GP1-GP5)
/// or all ordered argument pairs (GP6-GP11). Strict inequalities are checked
/// exactly on the stored reals. Throws on gp outside 1..11.
GpReport check_gp(const Qbafc& fw, const StrengthMap& s, int gp);

/// Re-evaluates the property on the named witness only.
bool witness_violates(const Qbafc& fw, const StrengthMap& s, int gp, const GpWitness& w);

/// Settings for random frameworks shaped like the extracted ones:
/// class-consistent edge labels, default argument as the unique sink of
/// delta-edges, DAG, and every non-default argument with out-degree >= 1
/// (pointing either at the default argument or at earlier arguments).
struct RandomFrameworkSpec {
    uint64_t seed = 20240405;
    int min_arguments = 6;  // non-default arguments
    int max_arguments = 14;
    double edge_density = 0.2;
    double tau_min = 0.0;
    double tau_max = 1.5;
    double class1_probability = 0.5;
    bool grid_base_scores = true; // snap tau to multiples of 1/16
};

Qbafc random_qbafc(const RandomFrameworkSpec& spec, Rng& rng);

struct GpStageResult {
    long violation_count = 0;
    long instances = 0;
    long frameworks_violating = 0;
    int first_trial = -1;
    std::string first_witness;

    GpVerdict verdict() const {
        if (instances == 0) return GpVerdict::Vacuous;
        return violation_count > 0 ? GpVerdict::Violated : GpVerdict::Holds;
    }
};

struct GpSummary {
    RandomFrameworkSpec spec;
    long trials = 0;
    std::array<GpStageResult, 12> pre;  // indexed 1..11
    std::array<GpStageResult, 12> post;
};

/// Runs `trials` random frameworks through both stages and tallies
/// violations per property. Bit-for-bit reproducible for a fixed seed.
GpSummary gp_summary(const RandomFrameworkSpec& spec, long trials);

std::string gp_summary_table(const GpSummary& summary);
std::string gp_summary_json_text(const GpSummary& summary);

enum class Stage { Pre, Post };

struct Counterexample {
    Qbafc generated;      // the framework as generated (pre stage)
    Qbafc checked;        // the framework at the requested stage
    StrengthMap strengths;
    GpWitness witness;
};

/// Randomized search for a framework violating the property at the given
/// stage, pruned to a minimal witness by greedy argument removal. Returns
/// nothing if the budget is exhausted first.
std::optional<Counterexample> counterexample_search(int gp, Stage stage,
                                                    const RandomFrameworkSpec& spec,
                                                    long budget);

} // namespace argex
