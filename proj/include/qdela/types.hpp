#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace qdela {

/// Decision variables in problem units.
using Genotype = std::vector<double>;

/// Behaviour descriptor, always two components in [0, 1].
using Behaviour = std::array<double, 2>;

/// One evaluated point. Fitness is always maximised.
struct Sample {
    Genotype genotype;
    double fitness = 0.0;
    std::optional<Behaviour> behaviour;
};

/// A non-empty set of samples sharing one genotype dimension.
class Dataset {
public:
    /// Throws InvalidArgument when empty, on mixed dimensions, or non-finite values.
    explicit Dataset(std::vector<Sample> samples);

    std::size_t size() const noexcept { return samples_.size(); }
    std::size_t dim() const noexcept { return dim_; }
    const std::vector<Sample>& samples() const noexcept { return samples_; }
    const Sample& operator[](std::size_t i) const { return samples_[i]; }

    std::vector<double> fitness() const;

    /// Copy with rows in a canonical order (lexicographic genotype, then fitness).
    /// Feature groups work on this so they are invariant to row permutation.
    Dataset canonical() const;

private:
    std::vector<Sample> samples_;
    std::size_t dim_ = 0;
};

} // namespace qdela
