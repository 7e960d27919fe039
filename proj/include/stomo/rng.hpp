#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "stomo/errors.hpp"

namespace stomo {

// Deterministic random stream. The engine (std::mt19937_64) has a
// standard-specified output sequence, and the derived draws below are
// implemented here rather than with <random> distributions, whose output is
// implementation-defined. The same seed therefore yields the same subsets
// and the same noise on any compiler, which the byte-reproducibility
// guarantees of this project rely on.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, bound) without modulo bias (rejection sampling on the
    // low word of the 128-bit product).
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound == 0) throw ArgumentError("Rng::next_below: bound must be positive");
        std::uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Uniform on (0, 1]; never returns 0, so it is safe under log().
    double next_unit() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; draws come in pairs, the second is cached.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_unit();
        double u2 = next_unit();
        double r = std::sqrt(-2.0 * std::log(u1));
        double phi = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(phi);
        have_spare_ = true;
        return r * std::cos(phi);
    }

    // k distinct values from {0, ..., n-1}, uniform over k-subsets
    // (partial Fisher-Yates). Order of the result is unspecified.
    std::vector<int> sample_without_replacement(int n, int k) {
        if (k < 1 || k > n)
            throw ArgumentError("Rng::sample_without_replacement: need 1 <= k <= n");
        std::vector<int> pool(n);
        for (int i = 0; i < n; ++i) pool[i] = i;
        for (int i = 0; i < k; ++i) {
            int j = i + static_cast<int>(next_below(static_cast<std::uint64_t>(n - i)));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(k);
        return pool;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace stomo
