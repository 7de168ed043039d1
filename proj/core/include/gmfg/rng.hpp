#pragma once

#include <cstdint>
#include <span>

#include "gmfg/errors.hpp"

namespace gmfg {

/// Deterministic 64-bit generator (xoshiro256++), independent of the standard
/// library's unspecified distribution implementations. Streams seeded through
/// substream_seed are statistically independent, which is what the episode
/// sampler relies on for its per-(iteration, agent, episode) substreams.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1).
    double next_double();

    /// Samples an index from an unnormalized nonnegative weight vector by
    /// inverse CDF in fixed order; the final index absorbs rounding slack.
    int sample_index(std::span<const double> weights);

    /// One uniform sample from the probability simplex over `dim` points
    /// (normalized exponential draws).
    void sample_simplex(std::span<double> out);

private:
    std::uint64_t state_[4];
};

/// Collapses (base, a, b, c) into a seed for an independent substream.
/// Same inputs always give the same stream, so parallel and serial episode
/// generation produce identical batches.
std::uint64_t substream_seed(std::uint64_t base, std::uint64_t a,
                             std::uint64_t b, std::uint64_t c);

}  // namespace gmfg
