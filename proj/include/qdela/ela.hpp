#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qdela/problems.hpp"
#include "qdela/rng.hpp"
#include "qdela/sampling.hpp"
#include "qdela/types.hpp"

namespace qdela {

// Exploratory landscape analysis features f1..f37:
//
//   f1-f4    ela_conv   conv_prob, lin_dev_abs, lin_dev_orig, lin_prob
//   f5-f7    ela_distr  kurtosis, number_of_peaks, skewness
//   f8-f16   ela_level  lda_qda_{10,25,50}, mmce_lda_{..}, mmce_qda_{..}
//   f17-f23  ela_local  basin sizes (best, non-best, worst), best2mean contrast
//                       (orig, ratio), number of local optima (abs, rel)
//   f24-f32  ela_meta   linear/interaction/quadratic regression fits
//   f33-f37  nbc        nearest-better clustering
//
// All groups read fitness as maximised. Features that compare against an
// objective (conv, local) work on the minimisation scale, i.e. negated fitness.

inline constexpr int feature_count = 37;

enum class FeatureStatus { ok, insufficient_samples, degenerate_data };

std::string_view to_string(FeatureStatus s);
/// Throws InvalidArgument on an unknown status.
FeatureStatus parse_status(std::string_view s);

struct FeatureValue {
    std::optional<double> value;
    FeatureStatus status = FeatureStatus::ok;

    static FeatureValue of(double v) { return {v, FeatureStatus::ok}; }
    static FeatureValue undefined(FeatureStatus why) { return {std::nullopt, why}; }
    bool defined() const noexcept { return value.has_value(); }
    bool operator==(const FeatureValue&) const = default;
};

/// "f7" for 7.
std::string feature_code(int number);
/// 7 for "f7"; nullopt unless the code names one of f1..f37.
std::optional<int> parse_feature_code(std::string_view code);

/// Values keyed by feature number, plus the extra objective evaluations spent.
class FeatureVector {
public:
    void set(int number, FeatureValue v);
    bool contains(int number) const;
    /// Throws InvalidArgument if absent.
    const FeatureValue& at(int number) const;
    /// Present feature numbers in ascending order.
    std::vector<int> numbers() const;
    std::size_t size() const;
    /// Copy every entry of other into this and add its evaluations.
    void merge(const FeatureVector& other);

    std::size_t evals_used = 0;

    bool operator==(const FeatureVector&) const = default;

private:
    std::array<std::optional<FeatureValue>, feature_count + 1> values_{};
};

/// Extra-evaluation budgets of the objective-dependent groups.
struct ElaBudget {
    std::size_t conv_pairs = 1000;
    /// 0 selects min(50 d, 400).
    std::size_t local_starts = 0;
    std::size_t local_max_evals = 1000;
    std::size_t level_folds = 10;

    std::size_t resolved_local_starts(std::size_t dim) const;
};

/// Numerical conventions of the feature definitions.
struct ElaSettings {
    std::size_t kde_grid = 512;
    double peak_min_mass = 0.01;
    double conv_epsilon = 1e-10;
    double level_reg_scale = 1e-8;
    std::array<double, 3> level_quantiles{0.10, 0.25, 0.50};
    /// Single-linkage merge distance for local optima, as a fraction of the box diagonal.
    double local_cluster_fraction = 0.01;
    double local_best_tolerance = 1e-8;
    double local_initial_step = 0.05;
};

enum class FeatureGroup { distr, level, meta, conv, local, nbc };

inline constexpr std::array<FeatureGroup, 6> all_groups{
    FeatureGroup::distr, FeatureGroup::level, FeatureGroup::meta,
    FeatureGroup::conv,  FeatureGroup::local, FeatureGroup::nbc};

std::string_view to_string(FeatureGroup g);
FeatureGroup parse_group(std::string_view name);
/// Comma separated list (or "all"), returned unique in canonical order.
std::vector<FeatureGroup> parse_groups(std::string_view list);
/// Feature numbers produced by the group.
std::vector<int> group_features(FeatureGroup g);
bool needs_objective(FeatureGroup g);

/// Fitness function (maximised) used by the conv and local groups.
using Objective = std::function<double(std::span<const double>)>;

/// f5 kurtosis, f6 number of peaks, f7 skewness.
FeatureVector ela_distr(const Dataset& data, const ElaSettings& settings = {});

/// Number of modes of a Gaussian KDE of ys (Silverman bandwidth) whose mass
/// between the flanking density minima reaches min_mass.
int count_kde_peaks(std::span<const double> ys, std::size_t grid = 512, double min_mass = 0.01);

/// f8-f16 from cross-validated LDA/QDA on fitness quantile classes.
FeatureVector ela_level(const Dataset& data, const ElaBudget& budget,
                        const ElaSettings& settings = {});

/// f24-f32 from least-squares fits of linear and quadratic models.
FeatureVector ela_meta(const Dataset& data);

/// f1-f4 from convex combinations of sample pairs; spends conv_pairs evaluations.
/// Throws InvalidArgument when conv_pairs is 0.
FeatureVector ela_conv(const Dataset& data, const Objective& objective, const ElaBudget& budget,
                       Rng& rng, const ElaSettings& settings = {});

/// f17-f23 from Nelder-Mead searches started at dataset points.
/// Throws InvalidArgument when fewer than two starts or no evaluations are allowed.
FeatureVector ela_local(const Dataset& data, const Objective& objective, const Bounds& bounds,
                        const ElaBudget& budget, Rng& rng, const ElaSettings& settings = {});

/// Nearest neighbour and nearest better neighbour of every sample.
struct NearestBetter {
    std::vector<double> nn;
    /// Distance to the nearest strictly fitter sample; nullopt for the fittest.
    std::vector<std::optional<double>> nb;
    /// Row of that neighbour (lowest row on distance ties).
    std::vector<std::optional<std::size_t>> nb_index;
};

NearestBetter nearest_better(const Dataset& data);

/// f33-f37.
FeatureVector nbc_features(const Dataset& data);

/// Union of the selected groups. Groups that fail mark their features
/// undefined instead of aborting the others. problem may be null when no
/// objective-dependent group is selected; otherwise InvalidArgument.
FeatureVector extract_all(const Dataset& data, const Problem* problem, const ElaBudget& budget,
                          std::span<const FeatureGroup> selector, const Rng& rng,
                          const ElaSettings& settings = {});

} // namespace qdela
