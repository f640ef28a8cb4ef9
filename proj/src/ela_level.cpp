#include <algorithm>

#include <Eigen/Dense>

#include "qdela/discriminant.hpp"
#include "qdela/ela.hpp"
#include "qdela/error.hpp"
#include "qdela/stats.hpp"

namespace qdela {

FeatureVector ela_level(const Dataset& data, const ElaBudget& budget, const ElaSettings& settings) {
    if (budget.level_folds < 2)
        throw InvalidArgument("ela_level: at least two folds required");
    const int folds = static_cast<int>(budget.level_folds);
    FeatureVector out;

    // Feature numbers per quantile slot: ratio, lda error, qda error.
    auto mark_all = [&](std::size_t slot, FeatureValue v) {
        const int q = static_cast<int>(slot);
        out.set(8 + q, v);
        out.set(11 + q, v);
        out.set(14 + q, v);
    };

    if (data.size() < budget.level_folds * 10) {
        for (std::size_t s = 0; s < settings.level_quantiles.size(); ++s)
            mark_all(s, FeatureValue::undefined(FeatureStatus::insufficient_samples));
        return out;
    }

    const Dataset canon = data.canonical();
    const auto m = static_cast<Eigen::Index>(canon.size());
    const auto d = static_cast<Eigen::Index>(canon.dim());
    Eigen::MatrixXd x(m, d);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < d; ++j)
            x(i, j) = canon[static_cast<std::size_t>(i)].genotype[static_cast<std::size_t>(j)];
    }
    const auto ys = canon.fitness();
    auto sorted = ys;
    std::sort(sorted.begin(), sorted.end());

    for (std::size_t slot = 0; slot < settings.level_quantiles.size(); ++slot) {
        const double threshold = quantile_sorted(sorted, settings.level_quantiles[slot]);
        std::vector<int> labels(ys.size());
        std::size_t below = 0;
        for (std::size_t i = 0; i < ys.size(); ++i) {
            labels[i] = ys[i] <= threshold ? 0 : 1;
            below += labels[i] == 0 ? 1 : 0;
        }
        const std::size_t above = ys.size() - below;
        if (below < budget.level_folds || above < budget.level_folds) {
            mark_all(slot, FeatureValue::undefined(FeatureStatus::insufficient_samples));
            continue;
        }
        const double lda = cross_validated_error(GaussianDiscriminant::Kind::linear, x, labels, folds,
                                                 settings.level_reg_scale);
        const double qda = cross_validated_error(GaussianDiscriminant::Kind::quadratic, x, labels, folds,
                                                 settings.level_reg_scale);
        const int q = static_cast<int>(slot);
        out.set(11 + q, FeatureValue::of(lda));
        out.set(14 + q, FeatureValue::of(qda));
        if (qda > 0.0)
            out.set(8 + q, FeatureValue::of(lda / qda));
        else if (lda == 0.0)
            out.set(8 + q, FeatureValue::of(1.0));
        else
            out.set(8 + q, FeatureValue::undefined(FeatureStatus::degenerate_data));
    }
    return out;
}

} // namespace qdela
