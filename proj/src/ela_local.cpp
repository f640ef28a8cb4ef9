#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qdela/ela.hpp"
#include "qdela/error.hpp"
#include "qdela/nelder_mead.hpp"

namespace qdela {

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

} // namespace

FeatureVector ela_local(const Dataset& data, const Objective& objective, const Bounds& bounds,
                        const ElaBudget& budget, Rng& rng, const ElaSettings& settings) {
    const std::size_t starts = budget.resolved_local_starts(data.dim());
    if (starts < 2)
        throw InvalidArgument("ela_local: at least two local searches required");
    if (budget.local_max_evals == 0)
        throw InvalidArgument("ela_local: local_max_evals must be positive");
    if (!objective)
        throw InvalidArgument("ela_local: objective required");
    if (bounds.dim() != data.dim())
        throw InvalidArgument("ela_local: bounds do not match the dataset");

    const Dataset canon = data.canonical();
    const std::size_t m = canon.size();

    // Start rows: without replacement when the dataset is large enough.
    std::vector<std::size_t> rows;
    if (starts <= m) {
        std::vector<std::size_t> pool(m);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        for (std::size_t i = 0; i < starts; ++i)
            std::swap(pool[i], pool[i + rng.index(m - i)]);
        rows.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(starts));
    } else {
        for (std::size_t i = 0; i < starts; ++i)
            rows.push_back(rng.index(m));
    }

    NelderMeadOptions nm;
    nm.max_evals = budget.local_max_evals;
    nm.initial_step = settings.local_initial_step;
    const auto minimised = [&](std::span<const double> x) { return -objective(x); };

    FeatureVector out;
    std::vector<std::vector<double>> optima;
    std::vector<double> values;
    for (auto r : rows) {
        auto res = nelder_mead(minimised, canon[r].genotype, bounds, nm);
        out.evals_used += res.evals;
        optima.push_back(std::move(res.x));
        values.push_back(res.value);
    }

    // Single-linkage clustering of the optima.
    const double threshold = settings.local_cluster_fraction * bounds.diagonal();
    const double threshold_sq = threshold * threshold;
    std::vector<std::size_t> parent(starts);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    for (std::size_t i = 0; i < starts; ++i) {
        for (std::size_t j = i + 1; j < starts; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < optima[i].size(); ++k) {
                const double t = optima[i][k] - optima[j][k];
                s += t * t;
            }
            if (s <= threshold_sq) {
                const auto a = find_root(parent, i);
                const auto b = find_root(parent, j);
                if (a != b)
                    parent[std::max(a, b)] = std::min(a, b);
            }
        }
    }

    std::vector<double> best_in;   // per cluster, lowest minimised value
    std::vector<std::size_t> members;
    std::vector<std::size_t> label(starts, std::numeric_limits<std::size_t>::max());
    for (std::size_t i = 0; i < starts; ++i) {
        const auto root = find_root(parent, i);
        if (label[root] == std::numeric_limits<std::size_t>::max()) {
            label[root] = best_in.size();
            best_in.push_back(values[i]);
            members.push_back(0);
        }
        const auto c = label[root];
        best_in[c] = std::min(best_in[c], values[i]);
        ++members[c];
    }

    const std::size_t clusters = best_in.size();
    const double best = *std::min_element(best_in.begin(), best_in.end());
    const double worst = *std::max_element(best_in.begin(), best_in.end());
    const double tol = settings.local_best_tolerance;
    double sum_best = 0.0, sum_worst = 0.0, sum_rest = 0.0, mean_value = 0.0;
    std::size_t n_best = 0, n_worst = 0, n_rest = 0;
    for (std::size_t c = 0; c < clusters; ++c) {
        const double size = static_cast<double>(members[c]) / static_cast<double>(starts);
        mean_value += best_in[c];
        if (best_in[c] - best <= tol) {
            sum_best += size;
            ++n_best;
        } else {
            sum_rest += size;
            ++n_rest;
        }
        if (worst - best_in[c] <= tol) {
            sum_worst += size;
            ++n_worst;
        }
    }
    mean_value /= static_cast<double>(clusters);

    out.set(17, FeatureValue::of(sum_best / static_cast<double>(n_best)));
    out.set(18, n_rest > 0 ? FeatureValue::of(sum_rest / static_cast<double>(n_rest))
                           : FeatureValue::undefined(FeatureStatus::degenerate_data));
    out.set(19, FeatureValue::of(sum_worst / static_cast<double>(n_worst)));
    const double contrast = std::max(0.0, mean_value - best);
    out.set(20, FeatureValue::of(contrast));
    out.set(21, FeatureValue::of(worst > best ? contrast / (worst - best) : 0.0));
    out.set(22, FeatureValue::of(static_cast<double>(clusters)));
    out.set(23, FeatureValue::of(static_cast<double>(clusters) / static_cast<double>(starts)));
    return out;
}

} // namespace qdela
