#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qdela/rng.hpp"
#include "qdela/sampling.hpp"
#include "qdela/types.hpp"

namespace qdela {

enum class Domain { sphere, rastrigin, arm };
enum class BehaviourKind { subset, sigmoid, sine, arm };

std::string_view to_string(Domain d);
std::string_view to_string(BehaviourKind b);
/// Throws InvalidProblem on unknown names.
Domain parse_domain(std::string_view name);
BehaviourKind parse_behaviour(std::string_view name);

/// Total reach of the planar arm; behaviour space is [-reach, reach]^2.
inline constexpr double arm_reach = 12.0;

// Objectives return fitness (maximised): minimisation benchmarks are negated here.
double sphere_objective(std::span<const double> x);
double rastrigin_objective(std::span<const double> x);
/// Negative population variance of the joint angles.
double arm_objective(std::span<const double> angles);

/// End-effector position of a planar chain with cumulative joint angles.
std::array<double, 2> arm_forward_kinematics(std::span<const double> angles,
                                             std::span<const double> link_lengths);

/// Fixed d x 2 projection used by the sigmoid and sine behaviours.
class ProjectionMatrix {
public:
    /// Row-major d x 2 entries.
    ProjectionMatrix(std::size_t rows, std::vector<double> entries);
    /// Standard normal entries, drawn row by row.
    static ProjectionMatrix standard_normal(std::size_t rows, Rng& rng);

    std::size_t rows() const noexcept { return rows_; }
    double operator()(std::size_t i, std::size_t j) const { return w_[2 * i + j]; }
    /// x^T W.
    std::array<double, 2> project(std::span<const double> x) const;

private:
    std::size_t rows_;
    std::vector<double> w_;
};

Behaviour behaviour_subset(std::span<const double> x, const Bounds& bounds);
Behaviour behaviour_sigmoid(std::span<const double> x, const ProjectionMatrix& w);
Behaviour behaviour_sine(std::span<const double> x, const ProjectionMatrix& w);
/// End effector of an arm with d equal links of total length arm_reach, mapped to [0,1]^2.
Behaviour behaviour_arm(std::span<const double> angles);

/// One benchmark instance: objective, behaviour function and genotype box.
/// Immutable after construction; evaluation is safe from many threads.
class Problem {
public:
    Problem(Domain domain, BehaviourKind behaviour, std::size_t dim,
            std::optional<ProjectionMatrix> projection = std::nullopt);

    Domain domain() const noexcept { return domain_; }
    BehaviourKind behaviour_kind() const noexcept { return behaviour_; }
    std::string name() const { return std::string(to_string(domain_)); }
    std::string behaviour_name() const { return std::string(to_string(behaviour_)); }
    std::size_t dim() const noexcept { return dim_; }
    const Bounds& bounds() const noexcept { return bounds_; }
    const std::optional<ProjectionMatrix>& projection() const noexcept { return projection_; }

    double fitness(std::span<const double> x) const;
    Behaviour behaviour(std::span<const double> x) const;
    Sample evaluate(Genotype x) const;

private:
    Domain domain_;
    BehaviourKind behaviour_;
    std::size_t dim_;
    Bounds bounds_;
    std::optional<ProjectionMatrix> projection_;
};

/// Bind a (domain, behaviour, dimension) triple. Projection matrices are drawn
/// from a child of config_rng so every replicate of a configuration shares them.
/// Throws InvalidProblem for unknown names, incompatible pairs or d < 2 with subset.
Problem make_problem(std::string_view name, std::string_view behaviour, std::size_t d,
                     const Rng& config_rng);

/// Behaviour used when only the domain is known (arm for arm, subset otherwise).
std::string_view default_behaviour(Domain d);

} // namespace qdela
