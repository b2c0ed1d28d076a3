#pragma once

#include <cmath>
#include <cstdint>

#include "lassodf/numkit.hpp"

namespace lassodf {

// Deterministic counter-seeded RNG. Same (seed, stream) always produces the
// same draws regardless of platform or call interleaving, which is what lets
// Monte Carlo replicates run in any order (or in parallel) bit-identically.
class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t s = splitmix(seed + 0x9E3779B97F4A7C15ULL * (stream + 1));
        for (auto& w : state_) {
            s = splitmix(s);
            w = s;
        }
    }

    std::uint64_t next_u64() {
        // xoshiro256**
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

    // Uniform on (0, 1); never returns exactly 0 so log() below is safe.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double next_gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    Vector gaussian_vector(int n, double sigma) {
        Vector v(n);
        for (int i = 0; i < n; ++i) v[i] = sigma * next_gaussian();
        return v;
    }

  private:
    static std::uint64_t splitmix(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4]{};
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Reproducible N(0, sigma^2 I) draw; same (seed, stream) gives the same vector.
inline Vector gaussian_sampler(std::uint64_t seed, int n, double sigma, std::uint64_t stream = 0) {
    Rng rng(seed, stream);
    return rng.gaussian_vector(n, sigma);
}

}  // namespace lassodf
