#include <algorithm>
#include <cmath>
#include <initializer_list>

#include <Eigen/Dense>

#include "qdela/ela.hpp"

namespace qdela {

namespace {

struct Fit {
    Eigen::VectorXd coef; // intercept first
    double adj_r2 = 0.0;
    bool adj_r2_defined = true;
};

/// Min-norm least squares of y on [1, design]; predictors = design.cols().
Fit fit_model(const Eigen::MatrixXd& design, const Eigen::VectorXd& y, double ss_tot) {
    const Eigen::Index m = design.rows();
    const Eigen::Index p = design.cols();
    Eigen::MatrixXd a(m, p + 1);
    a.col(0).setOnes();
    a.rightCols(p) = design;
    Fit fit;
    fit.coef = a.completeOrthogonalDecomposition().solve(y);
    const double ss_res = (y - a * fit.coef).squaredNorm();
    if (ss_tot > 0.0) {
        const double r2 = 1.0 - ss_res / ss_tot;
        fit.adj_r2 = 1.0 - (1.0 - r2) * static_cast<double>(m - 1) / static_cast<double>(m - p - 1);
    } else {
        fit.adj_r2_defined = false;
    }
    return fit;
}

Eigen::MatrixXd hcat(std::initializer_list<const Eigen::MatrixXd*> blocks) {
    Eigen::Index cols = 0;
    for (const auto* b : blocks)
        cols += b->cols();
    Eigen::MatrixXd out((*blocks.begin())->rows(), cols);
    Eigen::Index at = 0;
    for (const auto* b : blocks) {
        out.middleCols(at, b->cols()) = *b;
        at += b->cols();
    }
    return out;
}

} // namespace

FeatureVector ela_meta(const Dataset& data) {
    const Dataset canon = data.canonical();
    const auto m = static_cast<Eigen::Index>(canon.size());
    const auto d = static_cast<Eigen::Index>(canon.dim());
    const Eigen::Index pairs = d * (d - 1) / 2;

    Eigen::MatrixXd linear(m, d), squares(m, d), interactions(m, pairs);
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& s = canon[static_cast<std::size_t>(i)];
        y(i) = s.fitness;
        Eigen::Index c = 0;
        for (Eigen::Index j = 0; j < d; ++j) {
            const double xj = s.genotype[static_cast<std::size_t>(j)];
            linear(i, j) = xj;
            squares(i, j) = xj * xj;
            for (Eigen::Index k = j + 1; k < d; ++k)
                interactions(i, c++) = xj * s.genotype[static_cast<std::size_t>(k)];
        }
    }
    const double ss_tot = (y.array() - y.mean()).square().sum();

    FeatureVector out;
    const auto insufficient = FeatureValue::undefined(FeatureStatus::insufficient_samples);
    const auto degenerate = FeatureValue::undefined(FeatureStatus::degenerate_data);
    auto adj_r2 = [&](const Fit& f) { return f.adj_r2_defined ? FeatureValue::of(f.adj_r2) : degenerate; };
    // The model has p predictors plus an intercept and needs m > p + 1.
    auto enough = [&](Eigen::Index p) { return m > p + 1; };

    if (enough(d)) {
        const Fit lin = fit_model(linear, y, ss_tot);
        const Eigen::VectorXd slopes = lin.coef.tail(d).cwiseAbs();
        const double max_slope = slopes.maxCoeff();
        const double min_slope = slopes.minCoeff();
        out.set(24, adj_r2(lin));
        out.set(25, FeatureValue::of(max_slope));
        out.set(26, min_slope > 0.0 ? FeatureValue::of(max_slope / min_slope) : degenerate);
        out.set(27, FeatureValue::of(min_slope));
        out.set(28, FeatureValue::of(lin.coef(0)));
    } else {
        for (int f = 24; f <= 28; ++f)
            out.set(f, insufficient);
    }

    if (enough(d + pairs)) {
        out.set(29, adj_r2(fit_model(hcat({&linear, &interactions}), y, ss_tot)));
    } else {
        out.set(29, insufficient);
    }

    if (enough(2 * d)) {
        const Fit quad = fit_model(hcat({&linear, &squares}), y, ss_tot);
        const Eigen::VectorXd quad_coef = quad.coef.tail(d).cwiseAbs();
        const double lo = quad_coef.minCoeff();
        out.set(30, adj_r2(quad));
        out.set(31, lo > 0.0 ? FeatureValue::of(quad_coef.maxCoeff() / lo) : degenerate);
    } else {
        out.set(30, insufficient);
        out.set(31, insufficient);
    }

    if (enough(2 * d + pairs)) {
        out.set(32, adj_r2(fit_model(hcat({&linear, &squares, &interactions}), y, ss_tot)));
    } else {
        out.set(32, insufficient);
    }
    return out;
}

} // namespace qdela
