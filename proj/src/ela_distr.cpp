#include <algorithm>
#include <cmath>
#include <numbers>

#include "ela_util.hpp"
#include "qdela/ela.hpp"
#include "qdela/error.hpp"
#include "qdela/stats.hpp"

namespace qdela {

int count_kde_peaks(std::span<const double> ys, std::size_t grid, double min_mass) {
    if (ys.size() < 2 || grid < 3)
        throw InvalidArgument("count_kde_peaks: need two values and three grid points");
    std::vector<double> sorted(ys.begin(), ys.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back())
        return 1;

    const auto m = static_cast<double>(sorted.size());
    const double sd = detail::sample_sd(sorted);
    const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
    const double h = 0.9 * spread * std::pow(m, -0.2);

    const double lo = sorted.front() - 3.0 * h;
    const double hi = sorted.back() + 3.0 * h;
    const double step = (hi - lo) / static_cast<double>(grid - 1);
    const double norm = 1.0 / (m * h * std::sqrt(2.0 * std::numbers::pi));
    std::vector<double> density(grid);
    for (std::size_t g = 0; g < grid; ++g) {
        const double at = lo + step * static_cast<double>(g);
        double s = 0.0;
        for (double y : sorted) {
            const double z = (at - y) / h;
            s += std::exp(-0.5 * z * z);
        }
        density[g] = s * norm;
    }

    // Split the grid at interior local minima; each piece holds one mode.
    int peaks = 0;
    double mass = 0.0;
    bool rising_seen = false;
    for (std::size_t g = 0; g < grid; ++g) {
        mass += density[g] * step;
        if (g > 0 && density[g] > density[g - 1])
            rising_seen = true;
        const bool boundary = g + 1 == grid ||
                              (g > 0 && density[g] < density[g - 1] && density[g] <= density[g + 1]);
        if (boundary) {
            if (mass >= min_mass && rising_seen)
                ++peaks;
            mass = 0.0;
            rising_seen = false;
        }
    }
    return std::max(peaks, 1);
}

FeatureVector ela_distr(const Dataset& data, const ElaSettings& settings) {
    FeatureVector out;
    // Moments need three samples, the density estimate four.
    if (data.size() < 3) {
        for (int f : {5, 6, 7})
            out.set(f, FeatureValue::undefined(FeatureStatus::insufficient_samples));
        return out;
    }
    auto ys = data.fitness();
    std::sort(ys.begin(), ys.end());
    if (ys.front() == ys.back()) {
        out.set(5, FeatureValue::undefined(FeatureStatus::degenerate_data));
        out.set(6, ys.size() >= 4 ? FeatureValue::of(1.0)
                                  : FeatureValue::undefined(FeatureStatus::insufficient_samples));
        out.set(7, FeatureValue::undefined(FeatureStatus::degenerate_data));
        return out;
    }

    const double mu = detail::mean(ys);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double y : ys) {
        const double c = y - mu;
        m2 += c * c;
        m3 += c * c * c;
        m4 += c * c * c * c;
    }
    const auto n = static_cast<double>(ys.size());
    m2 /= n;
    m3 /= n;
    m4 /= n;
    out.set(5, FeatureValue::of(m4 / (m2 * m2) - 3.0));
    out.set(6, ys.size() >= 4
                   ? FeatureValue::of(count_kde_peaks(ys, settings.kde_grid, settings.peak_min_mass))
                   : FeatureValue::undefined(FeatureStatus::insufficient_samples));
    out.set(7, FeatureValue::of(m3 / std::pow(m2, 1.5)));
    return out;
}

} // namespace qdela
