#include "qdela/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qdela/error.hpp"

namespace qdela {

std::string_view to_string(TestMethod m) {
    return m == TestMethod::exact ? "exact" : "normal-approx";
}

std::vector<double> mann_whitney_null_counts(std::size_t n_a, std::size_t n_b) {
    // counts[i][j][u]: assignments of i a-ranks and j b-ranks with statistic u,
    // built by deciding whether the largest rank belongs to a (adds j) or b.
    std::vector<std::vector<std::vector<double>>> counts(
        n_a + 1, std::vector<std::vector<double>>(n_b + 1));
    for (std::size_t i = 0; i <= n_a; ++i) {
        for (std::size_t j = 0; j <= n_b; ++j) {
            auto& cur = counts[i][j];
            cur.assign(i * j + 1, 0.0);
            if (i == 0 || j == 0) {
                cur[0] = 1.0;
                continue;
            }
            const auto& from_a = counts[i - 1][j];
            for (std::size_t u = 0; u < from_a.size(); ++u)
                cur[u + j] += from_a[u];
            const auto& from_b = counts[i][j - 1];
            for (std::size_t u = 0; u < from_b.size(); ++u)
                cur[u] += from_b[u];
        }
    }
    return counts[n_a][n_b];
}

double mann_whitney_exact_p(std::size_t n_a, std::size_t n_b, std::size_t u) {
    const auto counts = mann_whitney_null_counts(n_a, n_b);
    if (u >= counts.size())
        throw InvalidArgument("mann_whitney_exact_p: U out of range");
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    double lower = 0.0, upper = 0.0;
    for (std::size_t v = 0; v < counts.size(); ++v) {
        if (v <= u)
            lower += counts[v];
        if (v >= u)
            upper += counts[v];
    }
    return std::min(1.0, 2.0 * std::min(lower, upper) / total);
}

double mann_whitney_normal_p(std::size_t n_a, std::size_t n_b, double u, double tie_term) {
    const auto na = static_cast<double>(n_a);
    const auto nb = static_cast<double>(n_b);
    const double n = na + nb;
    const double mean = na * nb / 2.0;
    double var = na * nb / 12.0 * (n + 1.0);
    if (n > 1.0)
        var -= na * nb / 12.0 * tie_term / (n * (n - 1.0));
    if (!(var > 0.0))
        return 1.0;
    const double z = std::max(0.0, std::abs(u - mean) - 0.5) / std::sqrt(var);
    const double p = std::erfc(z / std::sqrt(2.0));
    return std::clamp(p, std::numeric_limits<double>::min(), 1.0);
}

TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty())
        throw InvalidArgument("mann_whitney_u: both samples need at least one value");
    const std::size_t n = a.size() + b.size();
    std::vector<std::pair<double, bool>> pooled;
    pooled.reserve(n);
    for (double v : a)
        pooled.emplace_back(v, true);
    for (double v : b)
        pooled.emplace_back(v, false);
    std::sort(pooled.begin(), pooled.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });

    double rank_sum_a = 0.0, tie_term = 0.0;
    bool ties = false;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && pooled[j].first == pooled[i].first)
            ++j;
        const double t = static_cast<double>(j - i);
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) {
            if (pooled[k].second)
                rank_sum_a += midrank;
        }
        if (j - i > 1) {
            ties = true;
            tie_term += t * t * t - t;
        }
        i = j;
    }

    TestResult r;
    r.n_a = a.size();
    r.n_b = b.size();
    const auto na = static_cast<double>(r.n_a);
    r.u_statistic = rank_sum_a - na * (na + 1.0) / 2.0;
    if (!ties && n <= mann_whitney_exact_limit) {
        r.method = TestMethod::exact;
        r.p_value = mann_whitney_exact_p(r.n_a, r.n_b, static_cast<std::size_t>(std::lround(r.u_statistic)));
    } else {
        r.method = TestMethod::normal_approx;
        r.p_value = mann_whitney_normal_p(r.n_a, r.n_b, r.u_statistic, tie_term);
    }
    return r;
}

double quantile_sorted(std::span<const double> xs, double q) {
    if (xs.empty())
        throw InvalidArgument("quantile of an empty sample");
    const double h = static_cast<double>(xs.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= xs.size())
        return xs.back();
    return xs[lo] + (h - static_cast<double>(lo)) * (xs[lo + 1] - xs[lo]);
}

MedianIqr median_iqr(std::span<const double> xs) {
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    return {quantile_sorted(sorted, 0.5), quantile_sorted(sorted, 0.25), quantile_sorted(sorted, 0.75)};
}

std::optional<MedianIqr> median_iqr(std::span<const std::optional<double>> xs) {
    std::vector<double> defined;
    for (const auto& x : xs) {
        if (x)
            defined.push_back(*x);
    }
    if (defined.empty())
        return std::nullopt;
    return median_iqr(std::span<const double>(defined));
}

} // namespace qdela
