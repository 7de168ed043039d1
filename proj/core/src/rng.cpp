#include "gmfg/rng.hpp"

#include <cmath>

namespace gmfg {

namespace {

// splitmix64: seed expander and hash combiner.
std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64(s);
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int Rng::sample_index(std::span<const double> weights) {
    if (weights.empty()) throw ValidationError("sample_index: empty weights");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0 || std::isnan(w))
            throw ValidationError("sample_index: negative or NaN weight");
        total += w;
    }
    if (total <= 0.0) throw ValidationError("sample_index: zero total weight");
    const double u = next_double() * total;
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
        acc += weights[k];
        if (u < acc) return static_cast<int>(k);
    }
    return static_cast<int>(weights.size()) - 1;
}

void Rng::sample_simplex(std::span<double> out) {
    if (out.empty()) throw ValidationError("sample_simplex: empty output");
    double total = 0.0;
    for (auto& v : out) {
        // -log(u) with u in (0,1]; flipping the half-open range avoids log(0).
        v = -std::log(1.0 - next_double());
        total += v;
    }
    for (auto& v : out) v /= total;
}

std::uint64_t substream_seed(std::uint64_t base, std::uint64_t a,
                             std::uint64_t b, std::uint64_t c) {
    std::uint64_t x = base;
    std::uint64_t h = splitmix64(x);
    x ^= a + 0x9e3779b97f4a7c15ULL;
    h ^= splitmix64(x);
    x ^= b + 0xb5297a4d3a2e4b15ULL;
    h ^= splitmix64(x);
    x ^= c + 0x68e31da4a1ce6e25ULL;
    h ^= splitmix64(x);
    return h;
}

}  // namespace gmfg
