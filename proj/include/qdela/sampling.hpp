#pragma once

#include <cstddef>
#include <vector>

#include "qdela/rng.hpp"
#include "qdela/types.hpp"

namespace qdela {

/// Axis-aligned box; lower[i] < upper[i] for every i.
class Bounds {
public:
    Bounds(std::vector<double> lower, std::vector<double> upper);
    /// Same [lo, hi] in every one of dim dimensions.
    static Bounds uniform(std::size_t dim, double lo, double hi);

    std::size_t dim() const noexcept { return lower_.size(); }
    const std::vector<double>& lower() const noexcept { return lower_; }
    const std::vector<double>& upper() const noexcept { return upper_; }
    double lower(std::size_t i) const { return lower_[i]; }
    double upper(std::size_t i) const { return upper_[i]; }
    double range(std::size_t i) const { return upper_[i] - lower_[i]; }
    /// Euclidean length of the box diagonal.
    double diagonal() const;

    bool contains(const Genotype& x) const;
    /// Componentwise clip into the box.
    void clip(Genotype& x) const;

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
};

/// Random-permutation Latin hypercube design of m points: along every
/// dimension each of the m equal-width strata holds exactly one point.
std::vector<Genotype> lhs_sample(std::size_t m, const Bounds& bounds, Rng& rng);

/// m i.i.d. uniform points in the box.
std::vector<Genotype> uniform_sample(std::size_t m, const Bounds& bounds, Rng& rng);

/// Stratum of value v among m equal strata of [lo, hi], clamped to [0, m).
std::size_t lhs_stratum(double v, double lo, double hi, std::size_t m);

} // namespace qdela
