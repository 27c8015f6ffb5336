#pragma once

#include <cstdint>

namespace hsfusion {

/// Counter-based generator: draw i of stream k under seed s is
///   splitmix64_mix(key + (i + 1) * 0x9E3779B97F4A7C15),
///   key = splitmix64_mix(s ^ splitmix64_mix(k + 0xD1B54A32D192ED03)).
/// Uniforms take the top 53 bits; normals use Box-Muller on consecutive pairs
/// of uniforms mapped to (0, 1]. Only integer arithmetic and libm log/sqrt/cos/sin
/// are involved, so streams are reproducible across platforms.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();
    /// Uniform in [0, 1).
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64_mix(std::uint64_t z);

}  // namespace hsfusion
