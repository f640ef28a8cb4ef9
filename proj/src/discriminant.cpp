#include "qdela/discriminant.hpp"

#include <cmath>

#include "qdela/error.hpp"

namespace qdela {

namespace {

Eigen::LLT<Eigen::MatrixXd> regularised_cholesky(Eigen::MatrixXd cov, double reg_scale) {
    const auto d = static_cast<double>(cov.rows());
    double lambda = reg_scale * cov.trace() / d;
    if (!(lambda > 0.0))
        lambda = 1e-12;
    cov.diagonal().array() += lambda;
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    // Rounding can still leave a nearly singular matrix indefinite.
    while (llt.info() != Eigen::Success) {
        cov.diagonal().array() += lambda;
        lambda *= 10.0;
        llt.compute(cov);
    }
    return llt;
}

} // namespace

void GaussianDiscriminant::fit(const Eigen::MatrixXd& x, std::span<const int> labels) {
    const Eigen::Index n = x.rows();
    const Eigen::Index d = x.cols();
    if (static_cast<std::size_t>(n) != labels.size() || n == 0)
        throw InvalidArgument("discriminant fit: label count does not match rows");

    Eigen::Index counts[2] = {0, 0};
    Eigen::RowVectorXd sums[2] = {Eigen::RowVectorXd::Zero(d), Eigen::RowVectorXd::Zero(d)};
    for (Eigen::Index i = 0; i < n; ++i) {
        const int c = labels[static_cast<std::size_t>(i)];
        if (c != 0 && c != 1)
            throw InvalidArgument("discriminant fit: labels must be 0 or 1");
        ++counts[c];
        sums[c] += x.row(i);
    }
    if (counts[0] == 0 || counts[1] == 0)
        throw InvalidArgument("discriminant fit: both classes must be present");

    Eigen::MatrixXd scatter[2] = {Eigen::MatrixXd::Zero(d, d), Eigen::MatrixXd::Zero(d, d)};
    for (int c = 0; c < 2; ++c)
        classes_[c].mean = sums[c] / static_cast<double>(counts[c]);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int c = labels[static_cast<std::size_t>(i)];
        const Eigen::RowVectorXd centred = x.row(i) - classes_[c].mean;
        scatter[c].selfadjointView<Eigen::Lower>().rankUpdate(centred.transpose());
    }
    for (auto& s : scatter) {
        const Eigen::MatrixXd full = s.selfadjointView<Eigen::Lower>();
        s = full;
    }

    if (kind_ == Kind::linear) {
        const double dof = std::max<double>(1.0, static_cast<double>(n - 2));
        const auto llt = regularised_cholesky((scatter[0] + scatter[1]) / dof, reg_scale_);
        double log_det = 0.0;
        for (Eigen::Index i = 0; i < d; ++i)
            log_det += 2.0 * std::log(llt.matrixL()(i, i));
        for (auto& c : classes_) {
            c.chol = llt;
            c.log_det = log_det;
        }
    } else {
        for (int c = 0; c < 2; ++c) {
            const double dof = std::max<double>(1.0, static_cast<double>(counts[c] - 1));
            classes_[c].chol = regularised_cholesky(scatter[c] / dof, reg_scale_);
            double log_det = 0.0;
            for (Eigen::Index i = 0; i < d; ++i)
                log_det += 2.0 * std::log(classes_[c].chol.matrixL()(i, i));
            classes_[c].log_det = log_det;
        }
    }
    for (int c = 0; c < 2; ++c)
        classes_[c].log_prior = std::log(static_cast<double>(counts[c]) / static_cast<double>(n));
}

double GaussianDiscriminant::score(const ClassModel& c,
                                   const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
    const Eigen::VectorXd centred = (row - c.mean).transpose();
    const Eigen::VectorXd z = c.chol.matrixL().solve(centred);
    return c.log_prior - 0.5 * z.squaredNorm() - 0.5 * c.log_det;
}

int GaussianDiscriminant::predict(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
    return score(classes_[1], row) > score(classes_[0], row) ? 1 : 0;
}

std::vector<int> stratified_folds(std::span<const int> labels, int folds) {
    if (folds < 2)
        throw InvalidArgument("stratified_folds: need at least two folds");
    std::vector<int> fold(labels.size());
    int next[2] = {0, 0};
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int c = labels[i];
        fold[i] = next[c];
        next[c] = (next[c] + 1) % folds;
    }
    return fold;
}

double cross_validated_error(GaussianDiscriminant::Kind kind, const Eigen::MatrixXd& x,
                             std::span<const int> labels, int folds, double reg_scale) {
    const auto fold = stratified_folds(labels, folds);
    const auto n = static_cast<Eigen::Index>(labels.size());
    double error_sum = 0.0;
    int used_folds = 0;
    for (int f = 0; f < folds; ++f) {
        std::vector<Eigen::Index> train, test;
        for (Eigen::Index i = 0; i < n; ++i)
            (fold[static_cast<std::size_t>(i)] == f ? test : train).push_back(i);
        if (test.empty())
            continue;
        Eigen::MatrixXd xt(static_cast<Eigen::Index>(train.size()), x.cols());
        std::vector<int> yt(train.size());
        for (std::size_t r = 0; r < train.size(); ++r) {
            xt.row(static_cast<Eigen::Index>(r)) = x.row(train[r]);
            yt[r] = labels[static_cast<std::size_t>(train[r])];
        }
        GaussianDiscriminant model(kind, reg_scale);
        model.fit(xt, yt);
        std::size_t wrong = 0;
        for (auto i : test) {
            if (model.predict(x.row(i)) != labels[static_cast<std::size_t>(i)])
                ++wrong;
        }
        error_sum += static_cast<double>(wrong) / static_cast<double>(test.size());
        ++used_folds;
    }
    return error_sum / static_cast<double>(used_folds);
}

} // namespace qdela
