#include <cmath>

#include "qdela/ela.hpp"
#include "qdela/error.hpp"

namespace qdela {

FeatureVector ela_conv(const Dataset& data, const Objective& objective, const ElaBudget& budget,
                       Rng& rng, const ElaSettings& settings) {
    if (budget.conv_pairs == 0)
        throw InvalidArgument("ela_conv: conv_pairs must be positive");
    if (!objective)
        throw InvalidArgument("ela_conv: objective required");
    FeatureVector out;
    if (data.size() < 2) {
        for (int f = 1; f <= 4; ++f)
            out.set(f, FeatureValue::undefined(FeatureStatus::insufficient_samples));
        return out;
    }

    const Dataset canon = data.canonical();
    const std::size_t m = canon.size();
    const std::size_t d = canon.dim();
    const double eps = settings.conv_epsilon;
    std::size_t convex = 0, linear = 0;
    double sum_dev = 0.0, sum_abs_dev = 0.0;
    Genotype mid(d);
    for (std::size_t p = 0; p < budget.conv_pairs; ++p) {
        const std::size_t i = rng.index(m);
        std::size_t j = rng.index(m - 1);
        if (j >= i)
            ++j;
        const double w = rng.uniform();
        const auto& a = canon[i];
        const auto& b = canon[j];
        for (std::size_t k = 0; k < d; ++k)
            mid[k] = w * a.genotype[k] + (1.0 - w) * b.genotype[k];
        // Minimisation scale: a convex objective gives a negative deviation.
        const double at_mid = -objective(mid);
        const double dev = at_mid - (w * -a.fitness + (1.0 - w) * -b.fitness);
        if (dev < -eps)
            ++convex;
        if (std::abs(dev) <= eps)
            ++linear;
        sum_dev += dev;
        sum_abs_dev += std::abs(dev);
    }
    const auto n = static_cast<double>(budget.conv_pairs);
    out.set(1, FeatureValue::of(static_cast<double>(convex) / n));
    out.set(2, FeatureValue::of(sum_abs_dev / n));
    out.set(3, FeatureValue::of(sum_dev / n));
    out.set(4, FeatureValue::of(static_cast<double>(linear) / n));
    out.evals_used = budget.conv_pairs;
    return out;
}

} // namespace qdela
