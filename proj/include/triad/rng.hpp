#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace triad {

/// splitmix64 step. Used to expand seeds and derive substream keys.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256** generator, seeded through splitmix64.
///
/// Hand-rolled (rather than <random> engines plus distributions) so that
/// every draw is identical across compilers and standard libraries; all
/// stochastic results in this project are a function of (data, seed) only.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Unbiased integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
        const std::uint64_t threshold = (0 - bound) % bound; // 2^64 mod bound
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// k distinct indices drawn from [0, n) without replacement.
    /// For small k relative to n uses rejection with a linear membership
    /// scan; otherwise a partial Fisher-Yates pass.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
        if (k > n) throw std::invalid_argument("sample_without_replacement: k > n");
        std::vector<std::size_t> out;
        out.reserve(k);
        if (k * 3 <= n) {
            while (out.size() < k) {
                const std::size_t cand = static_cast<std::size_t>(below(n));
                bool seen = false;
                for (std::size_t prev : out) {
                    if (prev == cand) { seen = true; break; }
                }
                if (!seen) out.push_back(cand);
            }
        } else {
            std::vector<std::size_t> idx(n);
            for (std::size_t i = 0; i < n; ++i) idx[i] = i;
            for (std::size_t i = 0; i < k; ++i) {
                const std::size_t j = i + static_cast<std::size_t>(below(n - i));
                std::swap(idx[i], idx[j]);
                out.push_back(idx[i]);
            }
        }
        return out;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_{};
};

/// Derives an independent substream key from a master seed and an index
/// path (e.g. {tag, tree} or {tag, grid point, fold}). Parallel workers
/// each construct Rng(derive_stream(...)) so results never depend on
/// scheduling or thread count.
inline std::uint64_t derive_stream(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t st = master ^ 0xa0761d6478bd642fULL;
    std::uint64_t key = splitmix64(st);
    for (std::uint64_t p : path) {
        st = key ^ (p + 0x9e3779b97f4a7c15ULL);
        key = splitmix64(st);
    }
    return key;
}

/// Stream tags keep substreams of different stages disjoint.
namespace stream_tag {
constexpr std::uint64_t tree = 1;
constexpr std::uint64_t kfold = 2;
constexpr std::uint64_t grid = 3;
constexpr std::uint64_t lda = 4;
constexpr std::uint64_t sweep = 5;
constexpr std::uint64_t scenario = 6;
} // namespace stream_tag

} // namespace triad
