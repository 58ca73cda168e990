#pragma once

#include <cstdint>
#include <random>

namespace ita {

/// Seeded generator with a platform-stable uniform mapping.
///
/// std::uniform_real_distribution differs between standard libraries, so
/// uniform() is derived directly from the top 53 bits of the engine output.
class RngState {
public:
    explicit RngState(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi); exactly lo when lo == hi.
    double uniform(double lo, double hi) {
        const double u = unit();
        return lo == hi ? lo : lo + u * (hi - lo);
    }

    bool operator==(const RngState& o) const { return seed_ == o.seed_ && engine_ == o.engine_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace ita
