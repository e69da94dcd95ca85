#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace pbed {

/// splitmix64 step; used to derive stream seeds from (master, index) tuples
/// so that worker-pool scheduling cannot change which seed a sample gets.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Deterministic seed for sample `sample` of cell `cell` under `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t sample) {
    return splitmix64(splitmix64(master ^ splitmix64(cell)) + sample);
}

/// Gaussian deviates from mt19937_64 via Box-Muller on explicitly constructed
/// 53-bit uniforms. std::normal_distribution is implementation-defined, which
/// would make seeded studies non-portable; this transform is pinned.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform on (0, 1].
    double uniform_pos() { return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53; }
    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Standard normal deviate.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Uniform integer in [0, n). Modulo composition is deterministic across
    /// platforms; the bias at n << 2^64 is irrelevant for index sampling.
    std::uint64_t below(std::uint64_t n) { return eng_() % n; }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace pbed
