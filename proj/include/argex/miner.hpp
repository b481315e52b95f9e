#pragma once

#include "argex/corpus.hpp"
#include "argex/pattern.hpp"

#include <cstdint>
#include <vector>

namespace argex {

struct MinerConfig {
    int alphabet_size = 100;       // most frequent attributes considered
    int gap_budget = 2;            // gap budget of every produced pattern
    int max_slots = 3;             // slots per pattern
    int max_attrs_per_pattern = 4; // attributes per pattern, across slots
    int num_patterns = 100;        // patterns to return
    int beam_width = 50;           // candidates kept per growth round
    uint64_t seed = 0;             // reserved; the miner itself is deterministic
};

/// Deterministic greedy beam miner. Seeds single-attribute patterns from the
/// alphabet_size most frequent attributes, then grows them by appending a
/// slot or enriching a slot, ranking candidates by the information gain of
/// the match/non-match split against the labels. Returns up to num_patterns
/// patterns, structurally deduplicated, ties broken by canonical encoding.
/// Requires a labeled dataset with both classes present (already annotated).
std::vector<Pattern> mine_patterns(const Dataset& data, const MinerConfig& config);

/// Information gain of splitting `labels` by the `matched` mask, in nats.
double information_gain(const std::vector<int>& labels, const std::vector<bool>& matched);

} // namespace argex
