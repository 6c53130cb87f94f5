#pragma once

#include <cstdint>

namespace crl {

// SplitMix64-based generator. Used everywhere instead of <random> engines so
// results are bit-identical across platforms and standard libraries.
//
// stream(seed, a, b) derives an independent generator from a seed and two
// counters (e.g. row and node index), so parallel sampling is deterministic
// regardless of evaluation order.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(mix(seed ^ 0x8f58'9cd1'4d33'2f14ULL)) {}

    static Rng stream(uint64_t seed, uint64_t a, uint64_t b) {
        uint64_t s = mix(seed ^ 0x6a09'e667'f3bc'c909ULL);
        s = mix(s ^ (a + 0x9e37'79b9'7f4a'7c15ULL));
        s = mix(s ^ (b + 0xbb67'ae85'84ca'a73bULL));
        Rng r(0);
        r.state_ = s;
        return r;
    }

    uint64_t next_u64() {
        state_ += 0x9e37'79b9'7f4a'7c15ULL;
        return mix(state_);
    }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in the open interval (0, 1); safe input for inverse CDFs.
    double next_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform integer in [0, n); n must be positive.
    uint64_t next_below(uint64_t n) {
        // Multiply-shift; bias is negligible for the ranges used here.
        return static_cast<uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    double next_uniform(double a, double b) { return a + (b - a) * next_double(); }

    double next_gaussian();

private:
    static uint64_t mix(uint64_t z) {
        z += 0x9e37'79b9'7f4a'7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58'476d'1ce4'e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d0'49bb'1331'11ebULL;
        return z ^ (z >> 31);
    }

    uint64_t state_;
};

// Quantile function of the standard normal; max relative error well below
// 1e-13 after the Halley refinement step.
double inverse_normal_cdf(double p);

}  // namespace crl
