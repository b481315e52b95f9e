#include "argex/miner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace argex {

namespace {

double entropy(int positives, int total) {
    if (total == 0) return 0.0;
    double p = static_cast<double>(positives) / total;
    double h = 0.0;
    if (p > 0.0) h -= p * std::log(p);
    if (p < 1.0) h -= (1.0 - p) * std::log(1.0 - p);
    return h;
}

struct Candidate {
    Pattern pattern;
    std::string encoding;
    double gain = 0.0;
};

bool better(const Candidate& a, const Candidate& b) {
    if (a.gain != b.gain) return a.gain > b.gain;
    return a.encoding < b.encoding;
}

} // namespace

double information_gain(const std::vector<int>& labels, const std::vector<bool>& matched) {
    int n = static_cast<int>(labels.size());
    int pos_total = 0, n_match = 0, pos_match = 0;
    for (int i = 0; i < n; ++i) {
        pos_total += labels[i];
        if (matched[i]) {
            ++n_match;
            pos_match += labels[i];
        }
    }
    double h = entropy(pos_total, n);
    double h_match = entropy(pos_match, n_match);
    double h_rest = entropy(pos_total - pos_match, n - n_match);
    double frac = static_cast<double>(n_match) / n;
    return h - frac * h_match - (1.0 - frac) * h_rest;
}

std::vector<Pattern> mine_patterns(const Dataset& data, const MinerConfig& config) {
    if (config.num_patterns == 0) return {};
    if (config.num_patterns < 0) throw std::invalid_argument("num_patterns must be >= 0");
    if (!data.has_both_classes()) {
        throw std::invalid_argument("mining needs a labeled dataset with both classes");
    }

    std::vector<int> labels;
    labels.reserve(data.documents.size());
    for (const auto& doc : data.documents) labels.push_back(*doc.label);

    // Alphabet: the most frequent attributes by document frequency.
    std::map<Attribute, int> doc_freq;
    for (const auto& doc : data.documents) {
        std::unordered_set<std::string> seen;
        for (const auto& tok : doc.tokens) {
            for (const auto& attr : tok.attributes) {
                if (seen.insert(attribute_string(attr)).second) ++doc_freq[attr];
            }
        }
    }
    std::vector<std::pair<Attribute, int>> ranked(doc_freq.begin(), doc_freq.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<Attribute> alphabet;
    for (const auto& [attr, freq] : ranked) {
        if (static_cast<int>(alphabet.size()) >= config.alphabet_size) break;
        alphabet.push_back(attr);
    }

    std::unordered_map<std::string, Candidate> pool;
    auto score = [&](Pattern pattern) {
        Candidate cand;
        cand.encoding = encode_pattern(pattern);
        if (pool.count(cand.encoding)) return;
        std::vector<bool> matched(data.documents.size());
        for (size_t i = 0; i < data.documents.size(); ++i) {
            matched[i] = matches(pattern, data.documents[i]);
        }
        cand.pattern = std::move(pattern);
        cand.gain = information_gain(labels, matched);
        pool.emplace(cand.encoding, std::move(cand));
    };

    for (const auto& attr : alphabet) {
        Pattern p;
        p.slots.push_back(Slot{{attr}});
        p.gap_budget = config.gap_budget;
        score(std::move(p));
    }

    auto take_beam = [&]() {
        std::vector<Candidate> beam;
        beam.reserve(pool.size());
        for (const auto& [enc, cand] : pool) beam.push_back(cand);
        std::sort(beam.begin(), beam.end(), better);
        if (static_cast<int>(beam.size()) > config.beam_width) {
            beam.resize(config.beam_width);
        }
        return beam;
    };

    int rounds = std::max(0, config.max_attrs_per_pattern - 1);
    for (int round = 0; round < rounds; ++round) {
        std::vector<Candidate> beam = take_beam();
        size_t before = pool.size();
        for (const auto& cand : beam) {
            const Pattern& base = cand.pattern;
            int total_attrs = 0;
            for (const auto& slot : base.slots) {
                total_attrs += static_cast<int>(slot.attributes.size());
            }
            if (total_attrs >= config.max_attrs_per_pattern) continue;
            // Append a fresh single-attribute slot.
            if (static_cast<int>(base.slots.size()) < config.max_slots) {
                for (const auto& attr : alphabet) {
                    Pattern grown = base;
                    grown.slots.push_back(Slot{{attr}});
                    score(std::move(grown));
                }
            }
            // Enrich an existing slot with one more attribute.
            for (size_t si = 0; si < base.slots.size(); ++si) {
                for (const auto& attr : alphabet) {
                    if (std::binary_search(base.slots[si].attributes.begin(),
                                           base.slots[si].attributes.end(), attr)) {
                        continue;
                    }
                    Pattern grown = base;
                    auto& attrs = grown.slots[si].attributes;
                    attrs.insert(std::lower_bound(attrs.begin(), attrs.end(), attr), attr);
                    score(std::move(grown));
                }
            }
        }
        if (pool.size() == before) break; // nothing new to grow
    }

    std::vector<Candidate> final_rank;
    final_rank.reserve(pool.size());
    for (const auto& [enc, cand] : pool) final_rank.push_back(cand);
    std::sort(final_rank.begin(), final_rank.end(), better);
    if (static_cast<int>(final_rank.size()) > config.num_patterns) {
        final_rank.resize(config.num_patterns);
    }
    std::vector<Pattern> result;
    result.reserve(final_rank.size());
    for (auto& cand : final_rank) result.push_back(std::move(cand.pattern));
    return result;
}

} // namespace argex
