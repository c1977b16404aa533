#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace scorecast {

/**
 * Deterministic random source with named substreams.
 *
 * All randomness in the library flows through this class so that a run is
 * reproducible from a single master seed. Substreams are derived as
 * splitmix64(master ^ fnv1a(name)) and are independent for distinct names.
 *
 * Sampling is implemented directly on top of mt19937_64 (uniform doubles via
 * the high 53 bits, normals via Box-Muller, bounded integers via rejection)
 * instead of the std <random> distributions, whose output is not specified
 * by the standard and differs between library implementations.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Independent generator for a named stage of a run.
    static Rng substream(std::uint64_t master_seed, std::string_view name);

    /// Seed that substream(master_seed, name) starts from; exposed so runs
    /// can log the derived per-stage seeds.
    static std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view name);

    std::uint64_t next_u64();

    /// Uniform on [0, 1).
    double uniform();

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi);

    /// Standard normal via Box-Muller.
    double normal();

    double normal(double mean, double sd);

    /// Uniform integer on [lo, hi], inclusive, unbiased.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::int64_t i = static_cast<std::int64_t>(v.size()) - 1; i > 0; --i) {
            const auto j = uniform_int(0, i);
            std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
        }
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// 64-bit FNV-1a, used for substream naming and artifact checksums.
std::uint64_t fnv1a64(std::string_view bytes);

/// splitmix64 mixing step.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace scorecast
