#include "qdela/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdela/config.hpp"
#include "qdela/csv_io.hpp"
#include "qdela/ela.hpp"
#include "qdela/error.hpp"
#include "qdela/harness.hpp"
#include "qdela/plot.hpp"

namespace qdela {

namespace {

namespace fs = std::filesystem;

int cmd_run(const fs::path& config_path, const fs::path& out_dir, std::ostream& err) {
    const ExperimentConfig cfg = load_config(config_path);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
    {
        std::ofstream resolved(out_dir / "config.resolved.yaml", std::ios::trunc);
        if (!resolved)
            throw IoError("cannot write resolved config into " + out_dir.string());
        resolved << emit_config(cfg.resolved());
    }
    const std::size_t threads = default_thread_count();
    err << "qdela run: " << to_string(cfg.domain) << '/' << to_string(cfg.behaviour) << " d=" << cfg.dim
        << " k=" << cfg.archive_size << ' ' << to_string(cfg.sampler) << ", " << cfg.runs << " runs on "
        << threads << " thread(s)\n";
    run_experiment_to_file(cfg, out_dir / "records.csv", threads);
    err << "qdela run: wrote " << (out_dir / "records.csv").string() << '\n';
    return exit_ok;
}

int cmd_features(const fs::path& dataset_path, const std::string& groups_text, std::uint64_t seed,
                 const std::optional<std::string>& domain, const std::optional<std::size_t>& dim,
                 std::ostream& out, std::ostream& err) {
    const auto groups = parse_groups(groups_text);
    const bool needs = std::any_of(groups.begin(), groups.end(), needs_objective);
    if (needs && !domain) {
        err << "error: groups conv and local need --domain (and --dim)\n";
        return exit_usage;
    }
    const Dataset data = read_dataset_csv(dataset_path);
    std::optional<Problem> problem;
    if (domain) {
        const std::size_t d = dim.value_or(data.dim());
        if (d != data.dim()) {
            err << "error: --dim " << d << " does not match the dataset dimension " << data.dim() << '\n';
            return exit_usage;
        }
        problem = make_problem(*domain, default_behaviour(parse_domain(*domain)), d, Rng(seed));
    }
    const FeatureVector fv =
        extract_all(data, problem ? &*problem : nullptr, ElaBudget{}, groups, Rng(seed));
    for (int f : fv.numbers()) {
        const auto& v = fv.at(f);
        out << feature_code(f) << ',' << (v.value ? format_real(*v.value) : "") << ',' << to_string(v.status)
            << '\n';
    }
    err << "qdela features: " << fv.size() << " features from " << data.size() << " samples, "
        << fv.evals_used << " extra evaluations\n";
    return exit_ok;
}

int cmd_compare(const fs::path& a_path, const fs::path& b_path, const std::string& code, std::size_t at,
                std::ostream& out, std::ostream& err) {
    const auto feature = parse_feature_code(code);
    if (!feature) {
        err << "error: unknown feature code '" << code << "'\n";
        return exit_usage;
    }
    const auto a = read_records_csv(a_path);
    const auto b = read_records_csv(b_path);
    const Comparison c = compare(a, b, *feature, at);
    out << "feature,U,p,n_a,n_b,median_a,median_b\n"
        << code << ',' << format_real(c.test.u_statistic) << ',' << format_real(c.test.p_value) << ','
        << c.test.n_a << ',' << c.test.n_b << ',' << format_real(c.median_a) << ','
        << format_real(c.median_b) << '\n';
    err << "qdela compare: " << to_string(c.test.method) << " test, excluded " << c.excluded_a << " + "
        << c.excluded_b << " undefined values\n";
    return exit_ok;
}

std::string series_label(const fs::path& p) {
    if (p.filename() == "records.csv" && p.has_parent_path() && !p.parent_path().filename().empty())
        return p.parent_path().filename().string();
    return p.stem().string();
}

int cmd_plot(const std::vector<std::string>& inputs, const std::string& code, const fs::path& out_path,
             const std::optional<std::size_t>& marker, std::ostream& err) {
    const auto feature = parse_feature_code(code);
    if (!feature) {
        err << "error: unknown feature code '" << code << "'\n";
        return exit_usage;
    }
    PlotSpec spec;
    spec.feature = *feature;
    spec.marker = marker;
    bool any_defined = false;
    for (const auto& in : inputs) {
        const auto records = read_records_csv(fs::path(in));
        PlotSeries s{series_label(in), aggregate(records, *feature)};
        for (const auto& r : s.rows)
            any_defined = any_defined || r.stats.has_value();
        spec.series.push_back(std::move(s));
    }
    if (!any_defined) {
        err << "error: no defined values of " << code << " to plot\n";
        return exit_usage;
    }
    if (out_path.has_parent_path())
        fs::create_directories(out_path.parent_path());
    fs::path csv_path = out_path;
    csv_path.replace_extension(".csv");
    {
        std::ofstream svg(out_path, std::ios::trunc);
        if (!svg || !(svg << render_svg(spec)))
            throw IoError("cannot write " + out_path.string());
    }
    {
        std::ofstream csv(csv_path, std::ios::trunc);
        if (!csv || !(csv << aggregate_csv(spec.series)))
            throw IoError("cannot write " + csv_path.string());
    }
    err << "qdela plot: wrote " << out_path.string() << " and " << csv_path.string() << '\n';
    return exit_ok;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quality-diversity landscape analysis: runs, features, comparisons and plots", "qdela"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    auto* run = app.add_subcommand("run", "Run an experiment configuration and write its records");
    run->add_option("--config", config_path, "Experiment config (YAML)")->required();
    run->add_option("--out", out_dir, "Output directory")->required();

    std::string dataset_path, groups = "all";
    std::uint64_t seed = 0;
    std::optional<std::string> domain;
    std::optional<std::size_t> dim;
    auto* features = app.add_subcommand("features", "Compute features of a dataset CSV");
    features->add_option("--dataset", dataset_path, "Dataset CSV")->required();
    features->add_option("--groups", groups, "Comma separated groups: distr,level,meta,conv,local,nbc or all");
    features->add_option("--seed", seed, "Seed for the sampling-based groups");
    features->add_option("--domain", domain, "Objective for conv/local: sphere, rastrigin or arm");
    features->add_option("--dim", dim, "Genotype dimension of the objective");

    std::string a_path, b_path, code;
    std::size_t at = 0;
    auto* cmp = app.add_subcommand("compare", "Mann-Whitney U test of one feature at one checkpoint");
    cmp->add_option("--a", a_path, "First records CSV")->required();
    cmp->add_option("--b", b_path, "Second records CSV")->required();
    cmp->add_option("--feature", code, "Feature code, e.g. f5")->required();
    cmp->add_option("--at", at, "Evaluation count")->required();

    std::vector<std::string> inputs;
    std::string plot_out, plot_code;
    std::optional<std::size_t> marker;
    auto* plot = app.add_subcommand("plot", "SVG of median and interquartile band over evaluations");
    plot->add_option("--in", inputs, "Records CSV files, one series each")->required();
    plot->add_option("--feature", plot_code, "Feature code")->required();
    plot->add_option("--out", plot_out, "SVG path; plotted numbers go next to it as .csv")->required();
    plot->add_option("--marker", marker, "Evaluation count of the dashed vertical line");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        if (*run)
            return cmd_run(config_path, out_dir, err);
        if (*features)
            return cmd_features(dataset_path, groups, seed, domain, dim, out, err);
        if (*cmp)
            return cmd_compare(a_path, b_path, code, at, out, err);
        if (*plot)
            return cmd_plot(inputs, plot_code, plot_out, marker, err);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return exit_io;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_io;
    }
    return exit_usage;
}

} // namespace qdela
