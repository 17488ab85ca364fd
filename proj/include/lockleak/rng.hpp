#pragma once

#include <algorithm>
#include <cstdint>
#include <string_view>
#include <vector>

namespace lockleak {

// Deterministic random stream: xoshiro256++ seeded through splitmix64.
// Not std::mt19937 + distributions because distribution output is
// implementation-defined; reports must be byte-identical across platforms.
class Rng {
public:
    explicit Rng(uint64_t seed) : seed_(seed) {
        uint64_t x = seed;
        for (auto& w : s_) w = splitmix(x);
    }

    uint64_t next() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, bound). bound == 0 is a caller bug; returns 0.
    uint64_t below(uint64_t bound) {
        if (bound < 2) return 0;
        // Rejection above the largest multiple of bound keeps the draw unbiased.
        const uint64_t limit = ~uint64_t(0) - (~uint64_t(0) % bound);
        uint64_t r = next();
        while (r >= limit) r = next();
        return r % bound;
    }

    bool coin() { return next() & 1; }

    double unit() { return double(next() >> 11) * 0x1.0p-53; }

    // Child stream derived from the construction seed and a label, independent
    // of how many draws were taken from this stream.
    Rng split(std::string_view label) const {
        uint64_t h = 1469598103934665603ull;
        for (char c : label) {
            h ^= uint8_t(c);
            h *= 1099511628211ull;
        }
        uint64_t x = seed_ ^ h;
        return Rng(splitmix(x));
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

    // k distinct values from [0, n), ascending.
    std::vector<uint32_t> sample_indices(uint32_t n, uint32_t k) {
        std::vector<uint32_t> out;
        if (k >= n) {
            out.resize(n);
            for (uint32_t i = 0; i < n; ++i) out[i] = i;
            return out;
        }
        if (uint64_t(k) * 2 >= n) {
            std::vector<uint32_t> all(n);
            for (uint32_t i = 0; i < n; ++i) all[i] = i;
            shuffle(all);
            out.assign(all.begin(), all.begin() + k);
        } else {
            // Floyd's sampling: k iterations, no O(n) scratch.
            for (uint32_t j = n - k; j < n; ++j) {
                uint32_t t = uint32_t(below(j + 1));
                bool dup = false;
                for (uint32_t v : out) dup |= (v == t);
                out.push_back(dup ? j : t);
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    uint64_t seed() const { return seed_; }

private:
    static uint64_t splitmix(uint64_t& x) {
        uint64_t z = (x += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t seed_;
    uint64_t s_[4];
};

} // namespace lockleak
