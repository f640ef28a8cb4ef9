#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "qdela/sampling.hpp"

namespace qdela {

struct NelderMeadOptions {
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    /// Initial simplex edge as a fraction of each dimension's range.
    double initial_step = 0.05;
    double min_diameter = 1e-8;
    double min_spread = 1e-10;
    std::size_t max_evals = 1000;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t evals = 0;
};

/// Minimise f from start inside bounds. Every trial vertex is clipped into
/// the box before evaluation; the search stops on simplex diameter, value
/// spread or evaluation budget, whichever comes first.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::span<const double> start, const Bounds& bounds,
                             const NelderMeadOptions& opts = {});

} // namespace qdela
