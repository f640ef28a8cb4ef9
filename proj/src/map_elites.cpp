#include "qdela/map_elites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qdela/error.hpp"
#include "qdela/kernels.hpp"

namespace qdela {

Centroids compute_centroids(std::size_t k, Rng& rng, const CvtOptions& opts) {
    if (k == 0)
        throw InvalidArgument("compute_centroids: k must be positive");
    const std::size_t n = std::max(
        k, std::min(std::max(opts.samples_per_centroid * k, opts.min_samples), opts.max_samples));

    std::vector<double> px(n), py(n);
    for (std::size_t i = 0; i < n; ++i) {
        px[i] = rng.uniform();
        py[i] = rng.uniform();
    }

    // k-means++ seeding.
    Centroids c;
    c.xs.reserve(k);
    c.ys.reserve(k);
    std::vector<double> dmin(n, std::numeric_limits<double>::infinity());
    auto add_center = [&](std::size_t i) {
        c.xs.push_back(px[i]);
        c.ys.push_back(py[i]);
        kernels::min_update_2d(px[i], py[i], px, py, dmin);
    };
    add_center(rng.index(n));
    while (c.size() < k) {
        double total = 0.0;
        for (double v : dmin)
            total += v;
        std::size_t pick = n - 1;
        if (total > 0.0) {
            const double r = rng.uniform() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += dmin[i];
                if (acc > r) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = rng.index(n);
        }
        add_center(pick);
    }

    // Lloyd iterations.
    std::vector<double> sum_x(k), sum_y(k);
    std::vector<std::size_t> count(k);
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
        std::fill(sum_x.begin(), sum_x.end(), 0.0);
        std::fill(sum_y.begin(), sum_y.end(), 0.0);
        std::fill(count.begin(), count.end(), 0);
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double d2 = 0.0;
            const std::size_t j = kernels::nearest_2d(px[i], py[i], c.xs, c.ys, &d2);
            inertia += d2;
            sum_x[j] += px[i];
            sum_y[j] += py[i];
            ++count[j];
        }
        for (std::size_t j = 0; j < k; ++j) {
            if (count[j] > 0) {
                c.xs[j] = sum_x[j] / static_cast<double>(count[j]);
                c.ys[j] = sum_y[j] / static_cast<double>(count[j]);
            }
        }
        if (std::isfinite(previous)) {
            const double change = std::abs(previous - inertia) / std::max(previous, 1e-300);
            if (change < opts.tolerance)
                break;
        }
        previous = inertia;
    }
    return c;
}

std::size_t nearest_centroid(const Behaviour& b, const Centroids& c) {
    return kernels::nearest_2d(b[0], b[1], c.xs, c.ys);
}

Archive::Archive(std::shared_ptr<const Centroids> centroids) : centroids_(std::move(centroids)) {
    if (!centroids_ || centroids_->size() == 0)
        throw InvalidArgument("archive: needs at least one centroid");
    cells_.resize(centroids_->size());
}

bool Archive::insert(const Sample& s) {
    if (!s.behaviour)
        throw InvalidArgument("archive insert: sample has no behaviour");
    const std::size_t idx = nearest_centroid(*s.behaviour, *centroids_);
    auto& slot = cells_[idx];
    if (!slot) {
        slot = s;
        occupied_.push_back(idx);
        return true;
    }
    if (s.fitness > slot->fitness) {
        slot = s;
        return true;
    }
    return false;
}

bool Archive::operator==(const Archive& other) const {
    if (eval_count_ != other.eval_count_ || cells_.size() != other.cells_.size())
        return false;
    if (centroids_->xs != other.centroids_->xs || centroids_->ys != other.centroids_->ys)
        return false;
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        const auto& a = cells_[i];
        const auto& b = other.cells_[i];
        if (a.has_value() != b.has_value())
            return false;
        if (a && (a->genotype != b->genotype || a->fitness != b->fitness || a->behaviour != b->behaviour))
            return false;
    }
    return true;
}

std::string_view to_string(OperatorKind k) {
    return k == OperatorKind::gaussian ? "gaussian" : "isolinedd";
}

Genotype gaussian_variation(const Genotype& parent, const OperatorConfig& cfg, const Bounds& bounds,
                            Rng& rng) {
    Genotype child = parent;
    for (std::size_t i = 0; i < child.size(); ++i)
        child[i] += cfg.sigma * bounds.range(i) * rng.normal();
    bounds.clip(child);
    return child;
}

Genotype isolinedd_variation(const Genotype& p1, const Genotype& p2, const OperatorConfig& cfg,
                             const Bounds& bounds, Rng& rng) {
    if (p1.size() != p2.size())
        throw InvalidArgument("isolinedd: parents differ in dimension");
    Genotype child = p1;
    for (std::size_t i = 0; i < child.size(); ++i)
        child[i] += cfg.sigma1 * bounds.range(i) * rng.normal();
    const double line = cfg.sigma2 * rng.normal();
    for (std::size_t i = 0; i < child.size(); ++i)
        child[i] += line * (p2[i] - p1[i]);
    bounds.clip(child);
    return child;
}

namespace {

std::vector<std::size_t> checked_checkpoints(std::size_t budget, std::size_t batch,
                                             std::span<const std::size_t> checkpoints) {
    if (batch == 0 || budget == 0 || budget % batch != 0)
        throw InvalidArgument("run_map_elites: budget must be a positive multiple of batch");
    std::vector<std::size_t> cps(checkpoints.begin(), checkpoints.end());
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
    for (auto cp : cps) {
        if (cp == 0 || cp % batch != 0 || cp > budget)
            throw InvalidArgument("run_map_elites: checkpoint " + std::to_string(cp) +
                                  " is not a multiple of batch within the budget");
    }
    return cps;
}

} // namespace

void run_map_elites(const Problem& problem, std::shared_ptr<const Centroids> centroids,
                    const OperatorConfig& op, std::size_t budget, std::size_t batch,
                    std::span<const std::size_t> checkpoints, Rng& rng, const SnapshotSink& sink) {
    const auto cps = checked_checkpoints(budget, batch, checkpoints);
    Archive archive(std::move(centroids));
    const Bounds& bounds = problem.bounds();
    auto next_cp = cps.begin();

    std::vector<Genotype> children = uniform_sample(batch, bounds, rng);
    while (true) {
        for (auto& child : children)
            archive.insert(problem.evaluate(std::move(child)));
        archive.add_evals(batch);
        if (next_cp != cps.end() && *next_cp == archive.eval_count()) {
            sink(archive);
            ++next_cp;
        }
        if (archive.eval_count() >= budget)
            break;

        const auto& occupied = archive.occupied_cells();
        const std::size_t n = occupied.size();
        children.clear();
        for (std::size_t c = 0; c < batch; ++c) {
            const std::size_t i1 = rng.index(n);
            const Genotype& p1 = archive.cell(occupied[i1])->genotype;
            if (op.kind == OperatorKind::gaussian) {
                children.push_back(gaussian_variation(p1, op, bounds, rng));
                continue;
            }
            std::size_t i2 = i1;
            if (n >= 2) {
                i2 = rng.index(n - 1);
                if (i2 >= i1)
                    ++i2;
            }
            const Genotype& p2 = archive.cell(occupied[i2])->genotype;
            children.push_back(isolinedd_variation(p1, p2, op, bounds, rng));
        }
    }
}

std::vector<Snapshot> run_map_elites(const Problem& problem, std::shared_ptr<const Centroids> centroids,
                                     const OperatorConfig& op, std::size_t budget, std::size_t batch,
                                     std::span<const std::size_t> checkpoints, Rng& rng) {
    std::vector<Snapshot> out;
    run_map_elites(problem, std::move(centroids), op, budget, batch, checkpoints, rng,
                   [&](const Archive& a) { out.push_back({a.eval_count(), a}); });
    return out;
}

std::vector<Snapshot> run_map_elites(const Problem& problem, std::size_t k, const OperatorConfig& op,
                                     std::size_t budget, std::size_t batch,
                                     std::span<const std::size_t> checkpoints, Rng& rng) {
    Rng cvt_rng = derive_rng(rng, "cvt");
    auto centroids = std::make_shared<const Centroids>(compute_centroids(k, cvt_rng));
    return run_map_elites(problem, std::move(centroids), op, budget, batch, checkpoints, rng);
}

Dataset archive_to_dataset(const Archive& a) {
    if (a.empty())
        throw EmptyArchive("archive_to_dataset: archive has no elites");
    std::vector<Sample> samples;
    samples.reserve(a.occupied());
    for (std::size_t i = 0; i < a.cell_count(); ++i) {
        if (a.cell(i))
            samples.push_back(*a.cell(i));
    }
    return Dataset(std::move(samples));
}

} // namespace qdela
