#pragma once

#include <cstdint>
#include <random>

namespace argex {

/// mt19937_64 behind hand-rolled draw methods, so sequences are identical
/// across standard libraries (std distributions are implementation-defined).
class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, bound). bound must be > 0.
    uint64_t next_below(uint64_t bound) {
        // Rejection sampling to kill modulo bias.
        uint64_t threshold = (~bound + 1) % bound; // (2^64 - bound) % bound
        uint64_t value;
        do {
            value = engine_();
        } while (value < threshold);
        return value % bound;
    }

    /// Uniform integer in [lo, hi] inclusive.
    int64_t next_int(int64_t lo, int64_t hi) {
        return lo + static_cast<int64_t>(next_below(static_cast<uint64_t>(hi - lo + 1)));
    }

    /// Uniform in [0, 1).
    double next_unit() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double next_real(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    bool next_bool(double p_true) { return next_unit() < p_true; }

  private:
    std::mt19937_64 engine_;
};

} // namespace argex
