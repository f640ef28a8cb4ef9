#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qdela/problems.hpp"
#include "qdela/rng.hpp"
#include "qdela/sampling.hpp"
#include "qdela/types.hpp"

namespace qdela {

/// k points in [0,1]^2, stored as separate x and y columns.
struct Centroids {
    std::vector<double> xs;
    std::vector<double> ys;

    std::size_t size() const noexcept { return xs.size(); }
    Behaviour point(std::size_t i) const { return {xs[i], ys[i]}; }
};

struct CvtOptions {
    std::size_t samples_per_centroid = 50;
    std::size_t min_samples = 10000;
    std::size_t max_samples = 500000;
    std::size_t max_iterations = 100;
    /// Stop when the relative change of inertia drops below this.
    double tolerance = 1e-9;
};

/// Centroidal Voronoi tessellation of [0,1]^2: k-means (k-means++ seeding,
/// Lloyd iterations) over min(50 k, 5e5) uniform points. An empty cluster
/// keeps its previous centroid.
Centroids compute_centroids(std::size_t k, Rng& rng, const CvtOptions& opts = {});

/// Cell whose centroid is nearest to b; ties go to the lowest index.
std::size_t nearest_centroid(const Behaviour& b, const Centroids& c);

/// One elite per centroid cell. Copies share the (immutable) centroids.
class Archive {
public:
    explicit Archive(std::shared_ptr<const Centroids> centroids);

    std::size_t cell_count() const noexcept { return cells_.size(); }
    std::size_t occupied() const noexcept { return occupied_.size(); }
    bool empty() const noexcept { return occupied_.empty(); }
    const std::optional<Sample>& cell(std::size_t i) const { return cells_[i]; }
    /// Occupied cell indices in first-filled order.
    const std::vector<std::size_t>& occupied_cells() const noexcept { return occupied_; }
    const Centroids& centroids() const noexcept { return *centroids_; }

    std::size_t eval_count() const noexcept { return eval_count_; }
    void add_evals(std::size_t n) noexcept { eval_count_ += n; }

    /// Elitist insertion: succeeds when the target cell is empty or the sample
    /// strictly improves on the incumbent. Throws InvalidArgument when the
    /// sample has no behaviour.
    bool insert(const Sample& s);

    bool operator==(const Archive& other) const;

private:
    std::shared_ptr<const Centroids> centroids_;
    std::vector<std::optional<Sample>> cells_;
    std::vector<std::size_t> occupied_;
    std::size_t eval_count_ = 0;
};

enum class OperatorKind { gaussian, isolinedd };

std::string_view to_string(OperatorKind k);

/// Step sizes are fractions of each dimension's range (sigma, sigma1); sigma2
/// scales the parent difference directly.
struct OperatorConfig {
    OperatorKind kind = OperatorKind::isolinedd;
    double sigma = 0.01;
    double sigma1 = 0.01;
    double sigma2 = 0.2;
};

/// clip(parent + sigma * range * N(0, I)).
Genotype gaussian_variation(const Genotype& parent, const OperatorConfig& cfg,
                            const Bounds& bounds, Rng& rng);

/// clip(p1 + sigma1 * range * N(0, I) + sigma2 * N(0, 1) * (p2 - p1)).
Genotype isolinedd_variation(const Genotype& p1, const Genotype& p2, const OperatorConfig& cfg,
                             const Bounds& bounds, Rng& rng);

struct Snapshot {
    std::size_t eval_count;
    Archive archive;
};

using SnapshotSink = std::function<void(const Archive&)>;

/// CVT-MAP-Elites. Generation 0 evaluates `batch` uniform genotypes; later
/// generations vary uniformly selected elites. The sink sees the archive after
/// the insertions of every generation whose eval count is a checkpoint.
/// Throws InvalidArgument unless budget and every checkpoint are positive
/// multiples of batch no larger than budget.
void run_map_elites(const Problem& problem, std::shared_ptr<const Centroids> centroids,
                    const OperatorConfig& op, std::size_t budget, std::size_t batch,
                    std::span<const std::size_t> checkpoints, Rng& rng,
                    const SnapshotSink& sink);

std::vector<Snapshot> run_map_elites(const Problem& problem,
                                     std::shared_ptr<const Centroids> centroids,
                                     const OperatorConfig& op, std::size_t budget,
                                     std::size_t batch,
                                     std::span<const std::size_t> checkpoints, Rng& rng);

/// Variant that builds its own k-cell tessellation from a child of rng.
std::vector<Snapshot> run_map_elites(const Problem& problem, std::size_t k,
                                     const OperatorConfig& op, std::size_t budget,
                                     std::size_t batch,
                                     std::span<const std::size_t> checkpoints, Rng& rng);

/// One sample per occupied cell, in cell order. Throws EmptyArchive.
Dataset archive_to_dataset(const Archive& a);

} // namespace qdela
