#include "qdela/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qdela/error.hpp"

namespace qdela {

std::string_view to_string(Domain d) {
    switch (d) {
    case Domain::sphere: return "sphere";
    case Domain::rastrigin: return "rastrigin";
    case Domain::arm: return "arm";
    }
    return "?";
}

std::string_view to_string(BehaviourKind b) {
    switch (b) {
    case BehaviourKind::subset: return "subset";
    case BehaviourKind::sigmoid: return "sigmoid";
    case BehaviourKind::sine: return "sine";
    case BehaviourKind::arm: return "arm";
    }
    return "?";
}

Domain parse_domain(std::string_view name) {
    for (auto d : {Domain::sphere, Domain::rastrigin, Domain::arm}) {
        if (name == to_string(d))
            return d;
    }
    throw InvalidProblem("unknown domain '" + std::string(name) + "'");
}

BehaviourKind parse_behaviour(std::string_view name) {
    for (auto b : {BehaviourKind::subset, BehaviourKind::sigmoid, BehaviourKind::sine, BehaviourKind::arm}) {
        if (name == to_string(b))
            return b;
    }
    throw InvalidProblem("unknown behaviour '" + std::string(name) + "'");
}

std::string_view default_behaviour(Domain d) {
    return d == Domain::arm ? "arm" : "subset";
}

double sphere_objective(std::span<const double> x) {
    double s = 0.0;
    for (double v : x)
        s += v * v;
    return -s;
}

double rastrigin_objective(std::span<const double> x) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double s = 10.0 * static_cast<double>(x.size());
    for (double v : x)
        s += v * v - 10.0 * std::cos(two_pi * v);
    return -s;
}

double arm_objective(std::span<const double> angles) {
    const auto n = static_cast<double>(angles.size());
    double mean = 0.0;
    for (double a : angles)
        mean += a;
    mean /= n;
    double var = 0.0;
    for (double a : angles)
        var += (a - mean) * (a - mean);
    return -var / n;
}

std::array<double, 2> arm_forward_kinematics(std::span<const double> angles,
                                             std::span<const double> link_lengths) {
    if (angles.size() != link_lengths.size())
        throw InvalidArgument("arm_forward_kinematics: angle and link counts differ");
    double theta = 0.0, ex = 0.0, ey = 0.0;
    for (std::size_t k = 0; k < angles.size(); ++k) {
        theta += angles[k];
        ex += link_lengths[k] * std::cos(theta);
        ey += link_lengths[k] * std::sin(theta);
    }
    return {ex, ey};
}

ProjectionMatrix::ProjectionMatrix(std::size_t rows, std::vector<double> entries)
    : rows_(rows), w_(std::move(entries)) {
    if (rows_ == 0 || w_.size() != 2 * rows_)
        throw InvalidArgument("projection matrix: expected rows x 2 entries");
    if (!std::all_of(w_.begin(), w_.end(), [](double v) { return std::isfinite(v); }))
        throw InvalidArgument("projection matrix: non-finite entry");
}

ProjectionMatrix ProjectionMatrix::standard_normal(std::size_t rows, Rng& rng) {
    std::vector<double> w(2 * rows);
    for (auto& v : w)
        v = rng.normal();
    return ProjectionMatrix(rows, std::move(w));
}

std::array<double, 2> ProjectionMatrix::project(std::span<const double> x) const {
    if (x.size() != rows_)
        throw InvalidArgument("projection: genotype dimension does not match W");
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        a += x[i] * w_[2 * i];
        b += x[i] * w_[2 * i + 1];
    }
    return {a, b};
}

Behaviour behaviour_subset(std::span<const double> x, const Bounds& bounds) {
    if (x.size() < 2 || bounds.dim() < 2)
        throw InvalidProblem("subset behaviour needs at least two dimensions");
    Behaviour b;
    for (std::size_t i = 0; i < 2; ++i)
        b[i] = std::clamp((x[i] - bounds.lower(i)) / bounds.range(i), 0.0, 1.0);
    return b;
}

Behaviour behaviour_sigmoid(std::span<const double> x, const ProjectionMatrix& w) {
    const auto z = w.project(x);
    return {1.0 / (1.0 + std::exp(-z[0])), 1.0 / (1.0 + std::exp(-z[1]))};
}

Behaviour behaviour_sine(std::span<const double> x, const ProjectionMatrix& w) {
    const auto z = w.project(x);
    return {(std::sin(z[0]) + 1.0) / 2.0, (std::sin(z[1]) + 1.0) / 2.0};
}

Behaviour behaviour_arm(std::span<const double> angles) {
    const std::vector<double> links(angles.size(), arm_reach / static_cast<double>(angles.size()));
    const auto e = arm_forward_kinematics(angles, links);
    return {std::clamp((e[0] + arm_reach) / (2.0 * arm_reach), 0.0, 1.0),
            std::clamp((e[1] + arm_reach) / (2.0 * arm_reach), 0.0, 1.0)};
}

namespace {

Bounds domain_bounds(Domain d, std::size_t dim) {
    if (d == Domain::arm)
        return Bounds::uniform(dim, -std::numbers::pi, std::numbers::pi);
    return Bounds::uniform(dim, -5.0, 5.0);
}

void check_pairing(Domain d, BehaviourKind b, std::size_t dim, bool has_projection) {
    if (dim == 0)
        throw InvalidProblem("problem dimension must be positive");
    const bool arm_pair = (d == Domain::arm) == (b == BehaviourKind::arm);
    if (!arm_pair) {
        throw InvalidProblem("behaviour '" + std::string(to_string(b)) + "' is not available for domain '" +
                             std::string(to_string(d)) + "'");
    }
    if (b == BehaviourKind::subset && dim < 2)
        throw InvalidProblem("subset behaviour needs at least two dimensions");
    const bool wants_projection = b == BehaviourKind::sigmoid || b == BehaviourKind::sine;
    if (wants_projection != has_projection)
        throw InvalidProblem("projection matrix required exactly for sigmoid and sine behaviours");
}

} // namespace

Problem::Problem(Domain domain, BehaviourKind behaviour, std::size_t dim,
                 std::optional<ProjectionMatrix> projection)
    : domain_(domain), behaviour_(behaviour), dim_(dim),
      bounds_(domain_bounds(domain, std::max<std::size_t>(dim, 1))), projection_(std::move(projection)) {
    check_pairing(domain, behaviour, dim, projection_.has_value());
    if (projection_ && projection_->rows() != dim)
        throw InvalidProblem("projection matrix rows must equal the dimension");
}

double Problem::fitness(std::span<const double> x) const {
    switch (domain_) {
    case Domain::sphere: return sphere_objective(x);
    case Domain::rastrigin: return rastrigin_objective(x);
    case Domain::arm: return arm_objective(x);
    }
    return 0.0;
}

Behaviour Problem::behaviour(std::span<const double> x) const {
    switch (behaviour_) {
    case BehaviourKind::subset: return behaviour_subset(x, bounds_);
    case BehaviourKind::sigmoid: return behaviour_sigmoid(x, *projection_);
    case BehaviourKind::sine: return behaviour_sine(x, *projection_);
    case BehaviourKind::arm: return behaviour_arm(x);
    }
    return {0.0, 0.0};
}

Sample Problem::evaluate(Genotype x) const {
    Sample s;
    s.fitness = fitness(x);
    s.behaviour = behaviour(x);
    s.genotype = std::move(x);
    return s;
}

Problem make_problem(std::string_view name, std::string_view behaviour, std::size_t d,
                     const Rng& config_rng) {
    const Domain domain = parse_domain(name);
    const BehaviourKind kind = parse_behaviour(behaviour);
    check_pairing(domain, kind, d, kind == BehaviourKind::sigmoid || kind == BehaviourKind::sine);
    std::optional<ProjectionMatrix> w;
    if (kind == BehaviourKind::sigmoid || kind == BehaviourKind::sine) {
        Rng rng = derive_rng(config_rng, "projection");
        w = ProjectionMatrix::standard_normal(d, rng);
    }
    return Problem(domain, kind, d, std::move(w));
}

} // namespace qdela
