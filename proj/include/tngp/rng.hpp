#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace tngp {

/// Seeded generator with a platform-independent mapping from mt19937_64
/// words to uniforms and normals, so identical seeds give bit-identical
/// streams everywhere (std::normal_distribution is implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; consumes two words per draw.
    double normal() {
        // u1 in (0, 1] so the log is finite
        double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
        double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace tngp
