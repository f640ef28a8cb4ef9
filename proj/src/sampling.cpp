#include "qdela/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qdela/error.hpp"

namespace qdela {

Bounds::Bounds(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.empty() || lower_.size() != upper_.size())
        throw InvalidArgument("bounds: lower and upper must be non-empty and of equal length");
    for (std::size_t i = 0; i < lower_.size(); ++i) {
        if (!(lower_[i] < upper_[i]) || !std::isfinite(lower_[i]) || !std::isfinite(upper_[i]))
            throw InvalidArgument("bounds: need finite lower < upper in every dimension");
    }
}

Bounds Bounds::uniform(std::size_t dim, double lo, double hi) {
    return Bounds(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
}

double Bounds::diagonal() const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim(); ++i)
        s += range(i) * range(i);
    return std::sqrt(s);
}

bool Bounds::contains(const Genotype& x) const {
    if (x.size() != dim())
        return false;
    for (std::size_t i = 0; i < dim(); ++i) {
        if (!(x[i] >= lower_[i] && x[i] <= upper_[i]))
            return false;
    }
    return true;
}

void Bounds::clip(Genotype& x) const {
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = std::clamp(x[i], lower_[i], upper_[i]);
}

std::size_t lhs_stratum(double v, double lo, double hi, std::size_t m) {
    const double t = (v - lo) / (hi - lo) * static_cast<double>(m);
    if (!(t > 0.0))
        return 0;
    return std::min(static_cast<std::size_t>(t), m - 1);
}

std::vector<Genotype> lhs_sample(std::size_t m, const Bounds& bounds, Rng& rng) {
    if (m == 0)
        throw InvalidArgument("lhs_sample: m must be positive");
    const std::size_t d = bounds.dim();
    std::vector<Genotype> points(m, Genotype(d));
    std::vector<std::size_t> perm(m);
    const auto md = static_cast<double>(m);
    for (std::size_t j = 0; j < d; ++j) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t i = m; i > 1; --i)
            std::swap(perm[i - 1], perm[rng.index(i)]);
        const double lo = bounds.lower(j), hi = bounds.upper(j);
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t stratum = perm[i];
            double v = lo + (static_cast<double>(stratum) + rng.uniform()) / md * (hi - lo);
            v = std::clamp(v, lo, hi);
            // Rounding can push a point across a stratum edge; step it back.
            while (lhs_stratum(v, lo, hi, m) > stratum)
                v = std::nextafter(v, lo);
            while (lhs_stratum(v, lo, hi, m) < stratum)
                v = std::nextafter(v, hi);
            points[i][j] = v;
        }
    }
    return points;
}

std::vector<Genotype> uniform_sample(std::size_t m, const Bounds& bounds, Rng& rng) {
    if (m == 0)
        throw InvalidArgument("uniform_sample: m must be positive");
    std::vector<Genotype> points(m, Genotype(bounds.dim()));
    for (auto& p : points) {
        for (std::size_t j = 0; j < bounds.dim(); ++j)
            p[j] = rng.uniform(bounds.lower(j), bounds.upper(j));
    }
    return points;
}

} // namespace qdela
