#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace qdela {

enum class TestMethod { exact, normal_approx };

std::string_view to_string(TestMethod m);

struct TestResult {
    /// U of the first sample: number of (a, b) pairs with a > b, ties counting 1/2.
    double u_statistic = 0.0;
    double p_value = 1.0;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
    TestMethod method = TestMethod::exact;
};

/// Largest combined sample size handled by exact enumeration.
inline constexpr std::size_t mann_whitney_exact_limit = 14;

/// Two-sided Mann-Whitney U test. Exact null distribution when
/// n_a + n_b <= 14 and there are no ties, otherwise the normal approximation
/// with tie-corrected variance and 0.5 continuity correction.
/// Throws InvalidArgument when either sample is empty.
TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

/// Counts of each U value (index = U) over all C(n_a + n_b, n_a) rank assignments.
std::vector<double> mann_whitney_null_counts(std::size_t n_a, std::size_t n_b);

/// Exact two-sided p for an integer U without ties.
double mann_whitney_exact_p(std::size_t n_a, std::size_t n_b, std::size_t u);

/// Normal-approximation two-sided p; tie_term is sum(t^3 - t) over tie groups.
double mann_whitney_normal_p(std::size_t n_a, std::size_t n_b, double u, double tie_term = 0.0);

/// Linear-interpolation quantile (inclusive, R type 7). xs must be sorted and non-empty.
double quantile_sorted(std::span<const double> xs, double q);

struct MedianIqr {
    double median;
    double q1;
    double q3;
};

/// Median and quartiles of the defined entries; nullopt when there are none.
std::optional<MedianIqr> median_iqr(std::span<const std::optional<double>> xs);
MedianIqr median_iqr(std::span<const double> xs);

} // namespace qdela
