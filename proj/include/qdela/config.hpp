#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qdela/ela.hpp"
#include "qdela/map_elites.hpp"
#include "qdela/problems.hpp"

namespace qdela {

enum class SamplerKind { lhs, qd_gaussian, qd_isolinedd };

std::string_view to_string(SamplerKind s);
SamplerKind parse_sampler(std::string_view s);

/// One cell of the experiment grid plus everything needed to replay it.
struct ExperimentConfig {
    Domain domain = Domain::sphere;
    BehaviourKind behaviour = BehaviourKind::subset;
    std::size_t dim = 2;
    std::size_t archive_size = 100;
    SamplerKind sampler = SamplerKind::qd_isolinedd;
    std::size_t budget = 1000000;
    std::size_t batch = 100;
    std::size_t runs = 30;
    std::uint64_t base_seed = 0;
    /// Sorted evaluation counts; empty selects default_checkpoints().
    std::vector<std::size_t> checkpoints;
    OperatorConfig op;
    ElaBudget ela;
    std::vector<FeatureGroup> features{all_groups.begin(), all_groups.end()};

    /// Throws ConfigError on values outside the supported grid.
    void validate() const;
    /// Copy with checkpoints and the local-search start count materialised.
    ExperimentConfig resolved() const;
    OperatorConfig operator_config() const;
    bool is_qd() const noexcept { return sampler != SamplerKind::lhs; }
};

/// 1-2-5 ladder from batch to budget (multiples of batch only), plus
/// archive_size when it fits and budget itself; sorted and unique.
std::vector<std::size_t> default_checkpoints(std::size_t batch, std::size_t budget,
                                             std::size_t archive_size);

/// Parse the YAML config document. Unknown keys, missing required keys
/// (domain, dim, archive_size, sampler) and bad values throw ConfigError
/// carrying the offending line.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// YAML with every field written out.
std::string emit_config(const ExperimentConfig& cfg);

} // namespace qdela
