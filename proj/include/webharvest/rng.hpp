#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace webharvest {

// SplitMix64 (Steele, Lea, Flood 2014). Chosen because the full output stream
// is specified by three lines of integer arithmetic, so manifests sampled with
// it can be regenerated byte-identically from any language.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Unbiased draw from [0, n) by rejection sampling (arc4random_uniform
    // style): values below 2^64 mod n are discarded.
    std::uint64_t bounded(std::uint64_t n);

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// FNV-1a 64-bit over the bytes of `s`.
std::uint64_t fnv1a64(std::string_view s);

// Seed for a per-class substream: seed XOR fnv1a64(class_id).
inline std::uint64_t stream_seed(std::uint64_t seed, std::string_view key) {
    return seed ^ fnv1a64(key);
}

// First k positions of a Fisher-Yates shuffle of 0..n-1: a uniform sample of
// k distinct indices, in sampled order.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, SplitMix64& rng);

template <typename T>
void shuffle(std::vector<T>& items, SplitMix64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.bounded(i));
        std::swap(items[i - 1], items[j]);
    }
}

} // namespace webharvest
