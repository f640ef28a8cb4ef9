#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qdela/config.hpp"
#include "qdela/ela.hpp"
#include "qdela/stats.hpp"

namespace qdela {

/// One feature value of one run at one evaluation count.
struct RunRecord {
    std::size_t run_id = 0;
    std::size_t eval_count = 0;
    int feature = 0;
    std::optional<double> value;
    FeatureStatus status = FeatureStatus::ok;

    bool operator==(const RunRecord&) const = default;
};

/// Orders by (run_id, eval_count, feature number).
bool record_less(const RunRecord& a, const RunRecord& b);

struct RunOptions {
    /// Worker threads; 0 uses QDELA_THREADS or the machine's parallelism.
    std::size_t threads = 0;
    /// When set, each run appends its records to run_<id>.csv here after every checkpoint.
    std::optional<std::filesystem::path> staging_dir;
};

/// Threads used when RunOptions::threads is 0.
std::size_t default_thread_count();

/// Every run of the configuration, records sorted by record_less.
std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// run_experiment with per-run staging files next to records_csv, merged into
/// it on completion. Throws IoError.
void run_experiment_to_file(const ExperimentConfig& cfg, const std::filesystem::path& records_csv,
                            std::size_t threads = 0);

struct AggregateRow {
    std::size_t eval_count = 0;
    std::optional<MedianIqr> stats;
    std::size_t defined = 0;
};

/// Per eval count, median and quartiles across runs of one feature.
/// Throws InvalidArgument when no record carries the feature.
std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records, int feature);

struct Comparison {
    TestResult test;
    double median_a = 0.0;
    double median_b = 0.0;
    /// Undefined values dropped from each side.
    std::size_t excluded_a = 0;
    std::size_t excluded_b = 0;
};

/// Mann-Whitney U over per-run values of a feature at one checkpoint.
/// Throws InvalidArgument when either side lacks the checkpoint or any defined value.
Comparison compare(const std::vector<RunRecord>& a, const std::vector<RunRecord>& b, int feature,
                   std::size_t eval_count);
/// Same, with each side read at its own checkpoint (e.g. QD at 1e5 against LHS at its archive size).
Comparison compare(const std::vector<RunRecord>& a, std::size_t eval_count_a,
                   const std::vector<RunRecord>& b, std::size_t eval_count_b, int feature);

} // namespace qdela
