#include "qdela/types.hpp"

#include <algorithm>
#include <cmath>

#include "qdela/error.hpp"

namespace qdela {

Dataset::Dataset(std::vector<Sample> samples) : samples_(std::move(samples)) {
    if (samples_.empty())
        throw InvalidArgument("dataset: no samples");
    dim_ = samples_.front().genotype.size();
    if (dim_ == 0)
        throw InvalidArgument("dataset: zero-dimensional genotype");
    for (const auto& s : samples_) {
        if (s.genotype.size() != dim_)
            throw InvalidArgument("dataset: genotypes of mixed dimension");
        if (!std::isfinite(s.fitness))
            throw InvalidArgument("dataset: non-finite fitness");
        if (!std::all_of(s.genotype.begin(), s.genotype.end(), [](double v) { return std::isfinite(v); }))
            throw InvalidArgument("dataset: non-finite genotype component");
    }
}

std::vector<double> Dataset::fitness() const {
    std::vector<double> ys;
    ys.reserve(samples_.size());
    for (const auto& s : samples_)
        ys.push_back(s.fitness);
    return ys;
}

Dataset Dataset::canonical() const {
    auto rows = samples_;
    std::stable_sort(rows.begin(), rows.end(), [](const Sample& a, const Sample& b) {
        if (a.genotype != b.genotype)
            return a.genotype < b.genotype;
        return a.fitness < b.fitness;
    });
    return Dataset(std::move(rows));
}

} // namespace qdela
