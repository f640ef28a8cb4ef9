#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qdela {

/// Two-class Gaussian discriminant. Linear shares one pooled covariance,
/// quadratic fits one per class. Covariances get lambda * I added with
/// lambda = reg_scale * trace(cov) / d (1e-12 when the trace vanishes).
class GaussianDiscriminant {
public:
    enum class Kind { linear, quadratic };

    GaussianDiscriminant(Kind kind, double reg_scale = 1e-8) : kind_(kind), reg_scale_(reg_scale) {}

    /// Rows of x are observations; labels are 0 or 1 and both must occur.
    void fit(const Eigen::MatrixXd& x, std::span<const int> labels);
    /// Class with the larger discriminant; ties go to class 0.
    int predict(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;

private:
    struct ClassModel {
        Eigen::RowVectorXd mean;
        Eigen::LLT<Eigen::MatrixXd> chol;
        double log_det = 0.0;
        double log_prior = 0.0;
    };
    double score(const ClassModel& c, const Eigen::Ref<const Eigen::RowVectorXd>& row) const;

    Kind kind_;
    double reg_scale_;
    ClassModel classes_[2];
};

/// Stratified fold index per row: within each class, rows in their given
/// order are dealt to folds round-robin.
std::vector<int> stratified_folds(std::span<const int> labels, int folds);

/// Mean over folds of the held-out misclassification rate.
double cross_validated_error(GaussianDiscriminant::Kind kind, const Eigen::MatrixXd& x,
                             std::span<const int> labels, int folds, double reg_scale = 1e-8);

} // namespace qdela
