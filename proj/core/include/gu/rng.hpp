#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace gu {

/// Deterministic PRNG used everywhere a seed appears. Self-contained
/// (xoshiro256** plus hand-rolled distributions) so that identical
/// (inputs, seed) produce identical bytes regardless of the standard
/// library in use.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform in [0, 1) with 53 bits of mantissa.
    double uniform();

    /// Uniform in {0, ..., bound-1}; bound must be > 0.
    std::uint64_t uniform_int(std::uint64_t bound);

    /// Standard normal via Box-Muller (spare value cached).
    double normal();

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Fisher-Yates shuffle, in place.
    template <typename T>
    void shuffle(std::vector<T>& values) {
        if (values.empty()) return;
        for (std::size_t i = values.size() - 1; i > 0; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_int(i + 1));
            std::swap(values[i], values[j]);
        }
    }

    /// Draws `count` distinct indices from {0, ..., population-1}.
    std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t count);

  private:
    std::uint64_t state_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Mixes a base seed with a stage name into an independent stream seed.
/// Adding a stage never perturbs the streams of existing stages.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage);

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// FNV-1a over arbitrary bytes; also used for config digests.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t basis = 14695981039346656037ull);

} // namespace gu
