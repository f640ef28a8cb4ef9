#include <algorithm>
#include <cmath>
#include <limits>

#include "ela_util.hpp"
#include "qdela/ela.hpp"
#include "qdela/kernels.hpp"

namespace qdela {

NearestBetter nearest_better(const Dataset& data) {
    const std::size_t m = data.size();
    const std::size_t d = data.dim();
    std::vector<double> columns(m * d);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < d; ++j)
            columns[j * m + i] = data[i].genotype[j];
    }

    NearestBetter out;
    out.nn.resize(m);
    out.nb.resize(m);
    out.nb_index.resize(m);
    std::vector<double> dist(m);
    constexpr double inf = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        kernels::sq_distances(columns, m, data[i].genotype, dist);
        const double fi = data[i].fitness;
        double nn = inf, nb = inf;
        std::size_t nb_at = m;
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i)
                continue;
            nn = std::min(nn, dist[j]);
            if (data[j].fitness > fi && dist[j] < nb) {
                nb = dist[j];
                nb_at = j;
            }
        }
        out.nn[i] = std::sqrt(nn);
        if (nb_at < m) {
            out.nb[i] = std::sqrt(nb);
            out.nb_index[i] = nb_at;
        }
    }
    return out;
}

FeatureVector nbc_features(const Dataset& data) {
    FeatureVector out;
    auto mark_all = [&](FeatureStatus why) {
        for (int f = 33; f <= 37; ++f)
            out.set(f, FeatureValue::undefined(why));
    };
    if (data.size() < 2) {
        mark_all(FeatureStatus::insufficient_samples);
        return out;
    }
    const Dataset canon = data.canonical();
    const auto ys = canon.fitness();
    if (std::all_of(ys.begin(), ys.end(), [&](double y) { return y == ys.front(); })) {
        mark_all(FeatureStatus::degenerate_data);
        return out;
    }

    const auto nbr = nearest_better(canon);
    const std::size_t m = canon.size();
    std::vector<double> nn, nb, ratio, indegree(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (!nbr.nb[i])
            continue;
        nn.push_back(nbr.nn[i]);
        nb.push_back(*nbr.nb[i]);
        if (nbr.nn[i] > 0.0)
            ratio.push_back(*nbr.nb[i] / nbr.nn[i]);
        indegree[*nbr.nb_index[i]] += 1.0;
    }

    const auto insufficient = FeatureValue::undefined(FeatureStatus::insufficient_samples);
    const auto degenerate = FeatureValue::undefined(FeatureStatus::degenerate_data);
    // x / 0 is undefined, 0 / 0 reads as a ratio of one.
    auto ratio_of = [&](double num, double den) {
        if (den > 0.0)
            return FeatureValue::of(num / den);
        return num == 0.0 ? FeatureValue::of(1.0) : degenerate;
    };

    if (ratio.size() >= 2) {
        const double mr = detail::mean(ratio);
        out.set(33, FeatureValue::of(detail::sample_sd(ratio) / mr));
    } else {
        out.set(33, insufficient);
    }
    out.set(34, FeatureValue::of(detail::pearson(ys, indegree)));
    out.set(35, nn.size() >= 2 ? FeatureValue::of(detail::pearson(nn, nb)) : insufficient);
    out.set(36, ratio_of(detail::mean(nn), detail::mean(nb)));
    out.set(37, nn.size() >= 2 ? ratio_of(detail::sample_sd(nn), detail::sample_sd(nb)) : insufficient);
    return out;
}

} // namespace qdela
