// rng.hpp — Deterministic random numbers with a stable stream: canonical
// doubles are built from the high 53 bits of mt19937_64 output, so sequences
// do not depend on the standard library's distribution implementations.

#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace eitcool {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Stream for one trajectory: a pure function of (master_seed, index),
    // independent of execution order. splitmix64-style mixing.
    static Rng for_trajectory(std::uint64_t master_seed, std::uint64_t index) {
        std::uint64_t z = master_seed + 0x9e3779b97f4a7c15ULL * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return Rng(z);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Index sampled proportionally to the (non-negative) weights.
    std::size_t discrete(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        double u = uniform() * total;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            u -= weights[i];
            if (u < 0.0) return i;
        }
        return weights.empty() ? 0 : weights.size() - 1;
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace eitcool
