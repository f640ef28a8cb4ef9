// Brute-force reference implementations used as test oracles.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "qdela/types.hpp"

namespace oracle {

// Per-dimension stratum counts via direct binning; true when every stratum holds exactly one point.
inline bool lhs_all_ones(const std::vector<qdela::Genotype>& pts, const std::vector<double>& lo,
                         const std::vector<double>& hi) {
    const std::size_t m = pts.size();
    for (std::size_t j = 0; j < lo.size(); ++j) {
        std::vector<int> count(m, 0);
        for (const auto& p : pts) {
            const double t = (p[j] - lo[j]) / (hi[j] - lo[j]) * static_cast<double>(m);
            auto s = static_cast<long>(std::floor(t));
            // A point exactly on an interior edge belongs to the stratum above it.
            if (s < 0 || s > static_cast<long>(m)) return false;
            if (s == static_cast<long>(m)) s = static_cast<long>(m) - 1;
            ++count[static_cast<std::size_t>(s)];
        }
        for (int c : count)
            if (c != 1) return false;
    }
    return true;
}

// Linear-scan nearest point, lowest index on ties.
inline std::size_t nearest(double x, double y, const std::vector<double>& xs,
                           const std::vector<double>& ys) {
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = x - xs[i];
        const double dy = y - ys[i];
        const double d = dx * dx + dy * dy;
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    return best;
}

struct NaiveArchive {
    std::vector<double> xs, ys;
    std::vector<std::optional<qdela::Sample>> cells;

    NaiveArchive(std::vector<double> cx, std::vector<double> cy)
        : xs(std::move(cx)), ys(std::move(cy)), cells(xs.size()) {}

    void insert(const qdela::Sample& s) {
        const auto c = nearest((*s.behaviour)[0], (*s.behaviour)[1], xs, ys);
        if (!cells[c] || s.fitness > cells[c]->fitness) cells[c] = s;
    }
};

// Two-sided exact Mann-Whitney p by enumerating every choice of ranks for sample a.
inline double mw_enumerated_p(std::size_t na, std::size_t nb, double u_obs) {
    const std::size_t n = na + nb;
    std::vector<int> pick(n, 0);
    std::fill(pick.end() - static_cast<long>(na), pick.end(), 1);
    std::size_t total = 0, le = 0, ge = 0;
    do {
        double rank_sum = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (pick[i]) rank_sum += static_cast<double>(i + 1);
        const double u = rank_sum - static_cast<double>(na * (na + 1)) / 2.0;
        ++total;
        if (u <= u_obs) ++le;
        if (u >= u_obs) ++ge;
    } while (std::next_permutation(pick.begin(), pick.end()));
    const double tail = static_cast<double>(std::min(le, ge)) / static_cast<double>(total);
    return std::min(1.0, 2.0 * tail);
}

// Double-loop nearest-better distance; nullopt for samples with no strictly better sample.
inline std::vector<std::optional<double>> nb_distances(const qdela::Dataset& d) {
    std::vector<std::optional<double>> out(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t j = 0; j < d.size(); ++j) {
            if (d[j].fitness <= d[i].fitness) continue;
            double s = 0;
            for (std::size_t k = 0; k < d.dim(); ++k) {
                const double t = d[i].genotype[k] - d[j].genotype[k];
                s += t * t;
            }
            const double dist = std::sqrt(s);
            if (!out[i] || dist < *out[i]) out[i] = dist;
        }
    }
    return out;
}

inline double population_variance(const std::vector<double>& v) {
    double mean = 0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double s = 0;
    for (double x : v) s += (x - mean) * (x - mean);
    return s / static_cast<double>(v.size());
}

} // namespace oracle
