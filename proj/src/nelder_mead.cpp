#include "qdela/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qdela/error.hpp"

namespace qdela {

namespace {

struct Vertex {
    std::vector<double> x;
    double f;
};

} // namespace

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::span<const double> start, const Bounds& bounds,
                             const NelderMeadOptions& opts) {
    const std::size_t n = start.size();
    if (n == 0 || n != bounds.dim())
        throw InvalidArgument("nelder_mead: start does not match bounds");
    if (opts.max_evals == 0)
        throw InvalidArgument("nelder_mead: max_evals must be positive");

    std::size_t evals = 0;
    auto budget_left = [&] { return evals < opts.max_evals; };
    auto evaluate = [&](std::vector<double>& x) {
        for (std::size_t i = 0; i < n; ++i)
            x[i] = std::clamp(x[i], bounds.lower(i), bounds.upper(i));
        ++evals;
        return f(x);
    };

    std::vector<Vertex> simplex;
    simplex.reserve(n + 1);
    {
        std::vector<double> x0(start.begin(), start.end());
        const double f0 = evaluate(x0);
        simplex.push_back({std::move(x0), f0});
    }
    for (std::size_t i = 0; i < n && budget_left(); ++i) {
        std::vector<double> x = simplex.front().x;
        const double step = opts.initial_step * bounds.range(i);
        x[i] = x[i] + step <= bounds.upper(i) ? x[i] + step : x[i] - step;
        const double fx = evaluate(x);
        simplex.push_back({std::move(x), fx});
    }

    auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
    if (simplex.size() < n + 1) {
        const auto best = std::min_element(simplex.begin(), simplex.end(), by_value);
        return {best->x, best->f, evals};
    }

    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    auto along = [&](std::vector<double>& out, const std::vector<double>& from, double t) {
        // out = centroid + t * (from - centroid)
        for (std::size_t i = 0; i < n; ++i)
            out[i] = centroid[i] + t * (from[i] - centroid[i]);
    };

    while (true) {
        std::stable_sort(simplex.begin(), simplex.end(), by_value);
        const Vertex& best = simplex.front();
        const Vertex& worst = simplex.back();

        // Size is the largest distance from the best vertex.
        double size = 0.0;
        for (std::size_t k = 1; k <= n; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double t = simplex[k].x[i] - best.x[i];
                s += t * t;
            }
            size = std::max(size, std::sqrt(s));
        }
        if (!budget_left() || size < opts.min_diameter || worst.f - best.f < opts.min_spread)
            break;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i)
                centroid[i] += simplex[k].x[i];
        }
        for (auto& c : centroid)
            c /= static_cast<double>(n);

        along(xr, worst.x, -opts.reflection);
        const double fr = evaluate(xr);
        if (fr < best.f) {
            if (!budget_left()) {
                simplex.back() = {xr, fr};
                continue;
            }
            for (std::size_t i = 0; i < n; ++i)
                xe[i] = centroid[i] + opts.expansion * (xr[i] - centroid[i]);
            const double fe = evaluate(xe);
            simplex.back() = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
            continue;
        }
        if (fr < simplex[n - 1].f) {
            simplex.back() = {xr, fr};
            continue;
        }
        if (!budget_left())
            continue;

        bool accepted = false;
        if (fr < worst.f) {
            for (std::size_t i = 0; i < n; ++i)
                xc[i] = centroid[i] + opts.contraction * (xr[i] - centroid[i]);
            const double fc = evaluate(xc);
            if (fc <= fr) {
                simplex.back() = {xc, fc};
                accepted = true;
            }
        } else {
            along(xc, worst.x, opts.contraction);
            const double fc = evaluate(xc);
            if (fc < worst.f) {
                simplex.back() = {xc, fc};
                accepted = true;
            }
        }
        if (accepted)
            continue;

        for (std::size_t k = 1; k <= n && budget_left(); ++k) {
            for (std::size_t i = 0; i < n; ++i)
                simplex[k].x[i] = simplex[0].x[i] + opts.shrink * (simplex[k].x[i] - simplex[0].x[i]);
            simplex[k].f = evaluate(simplex[k].x);
        }
    }

    const auto best = std::min_element(simplex.begin(), simplex.end(), by_value);
    return {best->x, best->f, evals};
}

} // namespace qdela
