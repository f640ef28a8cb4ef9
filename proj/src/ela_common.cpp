#include <algorithm>
#include <charconv>

#include "qdela/ela.hpp"
#include "qdela/error.hpp"

namespace qdela {

std::string_view to_string(FeatureStatus s) {
    switch (s) {
    case FeatureStatus::ok: return "ok";
    case FeatureStatus::insufficient_samples: return "insufficient-samples";
    case FeatureStatus::degenerate_data: return "degenerate-data";
    }
    return "?";
}

FeatureStatus parse_status(std::string_view s) {
    for (auto st : {FeatureStatus::ok, FeatureStatus::insufficient_samples, FeatureStatus::degenerate_data}) {
        if (s == to_string(st))
            return st;
    }
    throw InvalidArgument("unknown feature status '" + std::string(s) + "'");
}

std::string feature_code(int number) {
    return "f" + std::to_string(number);
}

std::optional<int> parse_feature_code(std::string_view code) {
    if (code.size() < 2 || code.front() != 'f' || code[1] == '0')
        return std::nullopt;
    int n = 0;
    const auto* end = code.data() + code.size();
    const auto [ptr, ec] = std::from_chars(code.data() + 1, end, n);
    if (ec != std::errc{} || ptr != end || n < 1 || n > feature_count)
        return std::nullopt;
    return n;
}

void FeatureVector::set(int number, FeatureValue v) {
    if (number < 1 || number > feature_count)
        throw InvalidArgument("feature number out of range: " + std::to_string(number));
    values_[static_cast<std::size_t>(number)] = v;
}

bool FeatureVector::contains(int number) const {
    return number >= 1 && number <= feature_count && values_[static_cast<std::size_t>(number)].has_value();
}

const FeatureValue& FeatureVector::at(int number) const {
    if (!contains(number))
        throw InvalidArgument("feature " + feature_code(number) + " not present");
    return *values_[static_cast<std::size_t>(number)];
}

std::vector<int> FeatureVector::numbers() const {
    std::vector<int> out;
    for (int i = 1; i <= feature_count; ++i) {
        if (values_[static_cast<std::size_t>(i)])
            out.push_back(i);
    }
    return out;
}

std::size_t FeatureVector::size() const {
    return numbers().size();
}

void FeatureVector::merge(const FeatureVector& other) {
    for (int i : other.numbers())
        set(i, other.at(i));
    evals_used += other.evals_used;
}

std::size_t ElaBudget::resolved_local_starts(std::size_t dim) const {
    return local_starts > 0 ? local_starts : std::min<std::size_t>(50 * dim, 400);
}

std::string_view to_string(FeatureGroup g) {
    switch (g) {
    case FeatureGroup::distr: return "distr";
    case FeatureGroup::level: return "level";
    case FeatureGroup::meta: return "meta";
    case FeatureGroup::conv: return "conv";
    case FeatureGroup::local: return "local";
    case FeatureGroup::nbc: return "nbc";
    }
    return "?";
}

FeatureGroup parse_group(std::string_view name) {
    for (auto g : all_groups) {
        if (name == to_string(g))
            return g;
    }
    throw InvalidArgument("unknown feature group '" + std::string(name) + "'");
}

std::vector<FeatureGroup> parse_groups(std::string_view list) {
    if (list == "all")
        return {all_groups.begin(), all_groups.end()};
    std::vector<bool> chosen(all_groups.size(), false);
    std::size_t pos = 0;
    while (pos <= list.size()) {
        const auto comma = std::min(list.find(',', pos), list.size());
        auto item = list.substr(pos, comma - pos);
        while (!item.empty() && item.front() == ' ')
            item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ')
            item.remove_suffix(1);
        if (item.empty())
            throw InvalidArgument("empty entry in feature group list");
        chosen[static_cast<std::size_t>(parse_group(item))] = true;
        pos = comma + 1;
    }
    std::vector<FeatureGroup> out;
    for (auto g : all_groups) {
        if (chosen[static_cast<std::size_t>(g)])
            out.push_back(g);
    }
    return out;
}

std::vector<int> group_features(FeatureGroup g) {
    auto range = [](int first, int last) {
        std::vector<int> v;
        for (int i = first; i <= last; ++i)
            v.push_back(i);
        return v;
    };
    switch (g) {
    case FeatureGroup::conv: return range(1, 4);
    case FeatureGroup::distr: return range(5, 7);
    case FeatureGroup::level: return range(8, 16);
    case FeatureGroup::local: return range(17, 23);
    case FeatureGroup::meta: return range(24, 32);
    case FeatureGroup::nbc: return range(33, 37);
    }
    return {};
}

bool needs_objective(FeatureGroup g) {
    return g == FeatureGroup::conv || g == FeatureGroup::local;
}

FeatureVector extract_all(const Dataset& data, const Problem* problem, const ElaBudget& budget,
                          std::span<const FeatureGroup> selector, const Rng& rng,
                          const ElaSettings& settings) {
    const bool objective_needed = std::any_of(selector.begin(), selector.end(), needs_objective);
    if (objective_needed && problem == nullptr)
        throw InvalidArgument("conv and local features need a problem to evaluate");
    if (problem && problem->dim() != data.dim())
        throw InvalidArgument("dataset dimension does not match the problem");

    Objective objective;
    if (problem)
        objective = [problem](std::span<const double> x) { return problem->fitness(x); };

    FeatureVector out;
    for (auto g : selector) {
        FeatureVector part;
        try {
            switch (g) {
            case FeatureGroup::distr: part = ela_distr(data, settings); break;
            case FeatureGroup::level: part = ela_level(data, budget, settings); break;
            case FeatureGroup::meta: part = ela_meta(data); break;
            case FeatureGroup::nbc: part = nbc_features(data); break;
            case FeatureGroup::conv: {
                Rng child = derive_rng(rng, "conv");
                part = ela_conv(data, objective, budget, child, settings);
                break;
            }
            case FeatureGroup::local: {
                Rng child = derive_rng(rng, "local");
                part = ela_local(data, objective, problem->bounds(), budget, child, settings);
                break;
            }
            }
        } catch (const Error&) {
            part = FeatureVector{};
            for (int f : group_features(g))
                part.set(f, FeatureValue::undefined(FeatureStatus::degenerate_data));
        }
        out.merge(part);
    }
    return out;
}

} // namespace qdela
