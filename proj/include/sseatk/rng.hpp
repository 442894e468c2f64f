#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace sseatk {

// SplitMix64 step (Vigna). Used directly as the generator so that seeded
// streams are identical across platforms and standard-library versions;
// std::uniform_*_distribution makes no such guarantee.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives an independent child seed, e.g. one stream per column or per run.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s ^= 0x9e3779b97f4a7c15ULL * (tag + 1);
    return a ^ splitmix64(s);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t u64() { return splitmix64(state_); }

    // Uniform in [0,1) with 53 random bits.
    double real() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0,n), unbiased (rejection on the wrap-around remainder).
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t x, r;
        do {
            x = u64();
            r = x % n;
        } while (x - r > std::uint64_t(-1) - (n - 1));
        return r;
    }

    bool bernoulli(double p) { return real() < p; }

private:
    std::uint64_t state_;
};

// First k entries of a Fisher-Yates pass: a uniform k-subset of {0..n-1},
// in draw order.
inline std::vector<std::uint32_t> sample_without_replacement(std::uint32_t n,
                                                             std::uint32_t k,
                                                             Rng& rng) {
    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    for (std::uint32_t i = 0; i < k; ++i) {
        std::uint32_t j = i + static_cast<std::uint32_t>(rng.below(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = rng.below(i);
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace sseatk
