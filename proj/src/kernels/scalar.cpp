// Reference kernels. Built with -ffp-contract=off so every multiply and add
// rounds separately, matching the vector variants lane for lane.

#include <limits>

#include "qdela/kernels.hpp"

namespace qdela::kernels::scalar {

std::size_t nearest_2d(double px, double py, const double* xs, const double* ys,
                       std::size_t k, double* best_sq) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_index = 0;
    for (std::size_t j = 0; j < k; ++j) {
        const double dx = xs[j] - px;
        const double dy = ys[j] - py;
        const double d = dx * dx + dy * dy;
        if (d < best) {
            best = d;
            best_index = j;
        }
    }
    if (best_sq)
        *best_sq = best;
    return best_index;
}

void min_update_2d(double cx, double cy, const double* xs, const double* ys,
                   std::size_t n, double* dmin) {
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - cx;
        const double dy = ys[i] - cy;
        const double d = dx * dx + dy * dy;
        if (d < dmin[i])
            dmin[i] = d;
    }
}

void sq_distances(const double* columns, std::size_t m, std::size_t d,
                  const double* point, double* out) {
    for (std::size_t i = 0; i < m; ++i)
        out[i] = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double* col = columns + j * m;
        const double p = point[j];
        for (std::size_t i = 0; i < m; ++i) {
            const double t = col[i] - p;
            out[i] += t * t;
        }
    }
}

} // namespace qdela::kernels::scalar
