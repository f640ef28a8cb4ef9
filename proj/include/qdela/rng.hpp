#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace qdela {

/// Reproducible pseudo-random generator.
///
/// xoshiro256** seeded through splitmix64; uniforms use the top 53 bits and
/// normals the Marsaglia polar method, so streams are identical on every
/// platform and standard library. Child generators are derived from the
/// parent's seed and a text label, never from its current state, so deriving
/// does not perturb the parent stream.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() noexcept;
    /// Uniform in [0, 1).
    double uniform() noexcept;
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    /// Standard normal.
    double normal() noexcept;
    /// Uniform integer in [0, n); n must be positive.
    std::uint64_t index(std::uint64_t n) noexcept;

    bool operator==(const Rng&) const = default;

private:
    std::uint64_t seed_;
    std::array<std::uint64_t, 4> state_{};
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

/// Child generator seeded by hash(parent seed, label). Throws InvalidArgument on an empty label.
Rng derive_rng(const Rng& parent, std::string_view label);

/// splitmix64 finaliser.
std::uint64_t mix64(std::uint64_t x) noexcept;

} // namespace qdela
