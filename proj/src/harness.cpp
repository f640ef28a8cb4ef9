#include "qdela/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "qdela/csv_io.hpp"
#include "qdela/error.hpp"
#include "qdela/map_elites.hpp"
#include "qdela/sampling.hpp"

namespace qdela {

bool record_less(const RunRecord& a, const RunRecord& b) {
    if (a.run_id != b.run_id)
        return a.run_id < b.run_id;
    if (a.eval_count != b.eval_count)
        return a.eval_count < b.eval_count;
    return a.feature < b.feature;
}

std::size_t default_thread_count() {
    if (const char* env = std::getenv("QDELA_THREADS")) {
        std::size_t n = 0;
        const std::string_view s(env);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
        if (ec == std::errc{} && ptr == s.data() + s.size() && n > 0)
            return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

/// Shared, read-only state of one configuration.
struct Setup {
    ExperimentConfig cfg;
    Problem problem;
    std::shared_ptr<const Centroids> centroids;
};

Setup prepare(const ExperimentConfig& raw) {
    raw.validate();
    const ExperimentConfig cfg = raw.resolved();
    const Rng config_rng = derive_rng(Rng(cfg.base_seed), "config");
    Problem problem = make_problem(to_string(cfg.domain), to_string(cfg.behaviour), cfg.dim, config_rng);
    std::shared_ptr<const Centroids> centroids;
    if (cfg.is_qd()) {
        Rng cvt_rng = derive_rng(config_rng, "cvt");
        centroids = std::make_shared<const Centroids>(compute_centroids(cfg.archive_size, cvt_rng));
    }
    return {cfg, std::move(problem), std::move(centroids)};
}

std::vector<RunRecord> feature_records(const Setup& s, std::size_t run_id, std::size_t eval_count,
                                       const Dataset& data, const Rng& run_rng) {
    const Rng ela_rng = derive_rng(run_rng, "ela/" + std::to_string(eval_count));
    FeatureVector fv;
    try {
        fv = extract_all(data, &s.problem, s.cfg.ela, s.cfg.features, ela_rng);
    } catch (const Error&) {
        // Leave fv empty; every selected feature is reported undefined below.
    }
    std::vector<RunRecord> out;
    for (auto g : s.cfg.features) {
        for (int f : group_features(g)) {
            RunRecord r{run_id, eval_count, f, std::nullopt, FeatureStatus::degenerate_data};
            if (fv.contains(f)) {
                r.value = fv.at(f).value;
                r.status = fv.at(f).status;
            }
            out.push_back(r);
        }
    }
    std::sort(out.begin(), out.end(), record_less);
    return out;
}

class StagingFile {
public:
    StagingFile(const std::optional<std::filesystem::path>& dir, std::size_t run_id) {
        if (!dir)
            return;
        path_ = *dir / ("run_" + std::to_string(run_id) + ".csv");
        out_.open(path_, std::ios::trunc);
        if (!out_)
            throw IoError("cannot create staging file " + path_.string());
    }

    void append(const std::vector<RunRecord>& records) {
        if (!out_.is_open())
            return;
        for (const auto& r : records)
            out_ << format_record(r) << '\n';
        out_.flush();
        if (!out_)
            throw IoError("cannot write staging file " + path_.string());
    }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

std::vector<RunRecord> run_one(const Setup& s, std::size_t run_id,
                               const std::optional<std::filesystem::path>& staging_dir) {
    const Rng run_rng = derive_rng(Rng(s.cfg.base_seed), "run/" + std::to_string(run_id));
    StagingFile staging(staging_dir, run_id);
    std::vector<RunRecord> out;
    auto emit = [&](std::size_t eval_count, const Dataset& data) {
        auto recs = feature_records(s, run_id, eval_count, data, run_rng);
        staging.append(recs);
        out.insert(out.end(), recs.begin(), recs.end());
    };

    if (!s.cfg.is_qd()) {
        Rng lhs_rng = derive_rng(run_rng, "lhs");
        std::vector<Sample> samples;
        for (auto& x : lhs_sample(s.cfg.archive_size, s.problem.bounds(), lhs_rng))
            samples.push_back(s.problem.evaluate(std::move(x)));
        emit(s.cfg.archive_size, Dataset(std::move(samples)));
        return out;
    }

    Rng qd_rng = derive_rng(run_rng, "qd");
    run_map_elites(s.problem, s.centroids, s.cfg.operator_config(), s.cfg.budget, s.cfg.batch,
                   s.cfg.checkpoints, qd_rng,
                   [&](const Archive& a) { emit(a.eval_count(), archive_to_dataset(a)); });
    return out;
}

} // namespace

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
    const Setup setup = prepare(cfg);
    const std::size_t runs = setup.cfg.runs;
    const std::size_t threads = std::min(runs, opts.threads > 0 ? opts.threads : default_thread_count());

    std::vector<std::vector<RunRecord>> per_run(runs);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t r = next++; r < runs; r = next++) {
            try {
                per_run[r] = run_one(setup, r, opts.staging_dir);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next = runs;
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);

    std::vector<RunRecord> all;
    for (auto& v : per_run)
        all.insert(all.end(), v.begin(), v.end());
    std::sort(all.begin(), all.end(), record_less);
    return all;
}

void run_experiment_to_file(const ExperimentConfig& cfg, const std::filesystem::path& records_csv,
                            std::size_t threads) {
    namespace fs = std::filesystem;
    const fs::path staging = records_csv.parent_path() / (records_csv.filename().string() + ".staging");
    std::error_code ec;
    fs::create_directories(staging, ec);
    if (ec)
        throw IoError("cannot create staging directory " + staging.string() + ": " + ec.message());

    RunOptions opts;
    opts.threads = threads;
    opts.staging_dir = staging;
    const auto records = run_experiment(cfg, opts);

    // Merge the staged rows; they must reproduce the in-memory table.
    std::vector<RunRecord> merged;
    for (std::size_t r = 0; r < cfg.runs; ++r) {
        const fs::path part = staging / ("run_" + std::to_string(r) + ".csv");
        std::ifstream in(part);
        if (!in)
            throw IoError("missing staging file " + part.string());
        std::stringstream body;
        body << records_header << '\n' << in.rdbuf();
        auto rows = read_records_csv(body);
        merged.insert(merged.end(), rows.begin(), rows.end());
    }
    std::sort(merged.begin(), merged.end(), record_less);
    if (merged != records)
        throw IoError("staged records disagree with the completed runs");

    const fs::path tmp = records_csv.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out)
            throw IoError("cannot write " + tmp.string());
        write_records_csv(out, merged);
        if (!out.flush())
            throw IoError("cannot write " + tmp.string());
    }
    fs::rename(tmp, records_csv, ec);
    if (ec)
        throw IoError("cannot move records into place: " + ec.message());
    fs::remove_all(staging, ec);
}

std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records, int feature) {
    std::map<std::size_t, std::vector<std::optional<double>>> by_eval;
    for (const auto& r : records) {
        if (r.feature == feature)
            by_eval[r.eval_count].push_back(r.value);
    }
    if (by_eval.empty())
        throw InvalidArgument("no records for feature " + feature_code(feature));
    std::vector<AggregateRow> rows;
    for (auto& [eval_count, values] : by_eval) {
        AggregateRow row;
        row.eval_count = eval_count;
        row.stats = median_iqr(std::span<const std::optional<double>>(values));
        row.defined = static_cast<std::size_t>(
            std::count_if(values.begin(), values.end(), [](const auto& v) { return v.has_value(); }));
        rows.push_back(row);
    }
    return rows;
}

Comparison compare(const std::vector<RunRecord>& a, const std::vector<RunRecord>& b, int feature,
                   std::size_t eval_count) {
    return compare(a, eval_count, b, eval_count, feature);
}

Comparison compare(const std::vector<RunRecord>& a, std::size_t eval_count_a,
                   const std::vector<RunRecord>& b, std::size_t eval_count_b, int feature) {
    auto collect = [&](const std::vector<RunRecord>& recs, std::size_t eval_count, const char* side,
                       std::size_t& excluded) {
        std::vector<double> values;
        bool seen = false;
        excluded = 0;
        for (const auto& r : recs) {
            if (r.feature != feature || r.eval_count != eval_count)
                continue;
            seen = true;
            if (r.value)
                values.push_back(*r.value);
            else
                ++excluded;
        }
        if (!seen)
            throw InvalidArgument(std::string(side) + " has no " + feature_code(feature) +
                                  " records at eval_count " + std::to_string(eval_count));
        if (values.empty())
            throw InvalidArgument(std::string(side) + " has no defined " + feature_code(feature) +
                                  " values at eval_count " + std::to_string(eval_count));
        return values;
    };
    Comparison c;
    const auto va = collect(a, eval_count_a, "a", c.excluded_a);
    const auto vb = collect(b, eval_count_b, "b", c.excluded_b);
    c.test = mann_whitney_u(va, vb);
    c.median_a = median_iqr(std::span<const double>(va)).median;
    c.median_b = median_iqr(std::span<const double>(vb)).median;
    return c;
}

} // namespace qdela
