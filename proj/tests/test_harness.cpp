#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "qdela/cli.hpp"
#include "qdela/config.hpp"
#include "qdela/csv_io.hpp"
#include "qdela/error.hpp"
#include "qdela/harness.hpp"
#include "qdela/plot.hpp"

using namespace qdela;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("qdela_test_" + tag + "_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

int cli(std::vector<std::string> args, std::string* out = nullptr, std::string* err = nullptr) {
    args.insert(args.begin(), "qdela");
    std::vector<const char*> argv;
    for (auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream o, e;
    const int rc = run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
    if (out)
        *out = o.str();
    if (err)
        *err = e.str();
    return rc;
}

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.domain = Domain::sphere;
    c.dim = 2;
    c.archive_size = 100;
    c.sampler = SamplerKind::qd_isolinedd;
    c.budget = 1000;
    c.runs = 3;
    c.base_seed = 5;
    c.checkpoints = {100, 500, 1000};
    c.features = {FeatureGroup::distr, FeatureGroup::meta, FeatureGroup::nbc};
    return c;
}

std::vector<RunRecord> synthetic(std::initializer_list<double> values, std::size_t at = 100, int f = 5) {
    std::vector<RunRecord> out;
    std::size_t r = 0;
    for (double v : values)
        out.push_back({r++, at, f, v, FeatureStatus::ok});
    return out;
}

const char* minimal_yaml = "domain: sphere\ndim: 2\narchive_size: 100\nsampler: qd-isolinedd\n"
                           "budget: 500\nruns: 2\nfeatures: [distr, nbc]\n";

} // namespace

TEST_SUITE("config") {

TEST_CASE("parse: minimal document and defaults") {
    const auto c = parse_config("domain: sphere\ndim: 8\narchive_size: 1000\nsampler: lhs\n");
    CHECK(c.domain == Domain::sphere);
    CHECK(c.dim == 8);
    CHECK(c.sampler == SamplerKind::lhs);
    CHECK(c.budget == 1000000);
    CHECK(c.batch == 100);
    CHECK(c.runs == 30);
    CHECK(c.features.size() == 6);
}

TEST_CASE("parse: errors carry line numbers") {
    try {
        parse_config("domain: sphere\ndim: 2\narchive_size: 100\nsampler: lhs\nbogus: 1\n");
        FAIL("unknown key accepted");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 5);
    }
    try {
        parse_config("domain: sphere\ndim: 3\narchive_size: 100\nsampler: lhs\n");
        FAIL("bad dim accepted");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 2);
    }
    try {
        parse_config("domain: sphere\ndim: 2\narchive_size: 100\nsampler: lhs\nela:\n  conv_pairs: 10\n  typo: 3\n");
        FAIL("nested unknown key accepted");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 7);
    }
    CHECK_THROWS_AS(parse_config("domain: sphere\ndim: 2\nsampler: lhs\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("domain: arm\nbehaviour: sine\ndim: 2\narchive_size: 100\nsampler: lhs\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("domain: [\n"), ConfigError);
}

TEST_CASE("default checkpoint ladder") {
    const auto cps = default_checkpoints(100, 1000000, 10000);
    CHECK(cps.front() == 100);
    CHECK(cps.back() == 1000000);
    CHECK(std::find(cps.begin(), cps.end(), 10000) != cps.end());
    CHECK(std::find(cps.begin(), cps.end(), 200) != cps.end());
    CHECK(std::find(cps.begin(), cps.end(), 500) != cps.end());
    CHECK(std::is_sorted(cps.begin(), cps.end()));
    const auto odd = default_checkpoints(100, 3000, 1000);
    CHECK(odd == std::vector<std::size_t>{100, 200, 500, 1000, 2000, 3000});
}

TEST_CASE("resolved config round-trips through the emitter") {
    auto c = parse_config(minimal_yaml);
    const auto r = c.resolved();
    CHECK_FALSE(r.checkpoints.empty());
    CHECK(r.ela.local_starts == 100);
    const auto again = parse_config(emit_config(r));
    CHECK(emit_config(again) == emit_config(r));
    CHECK(again.checkpoints == r.checkpoints);
    CHECK(again.op.sigma2 == r.op.sigma2);
}

}

TEST_SUITE("io") {

TEST_CASE("dataset csv round trip is exact") {
    Rng r(1);
    std::vector<Sample> s;
    for (int i = 0; i < 20; ++i)
        s.push_back({{r.normal() * 1e-7, r.normal() * 1e5, 1.0 / 3.0}, r.normal(), Behaviour{r.uniform(), r.uniform()}});
    const Dataset d(s);
    std::stringstream ss;
    write_dataset_csv(ss, d);
    CHECK(ss.str().rfind("x0,x1,x2,fitness,b0,b1\n", 0) == 0);
    const auto back = read_dataset_csv(ss);
    REQUIRE(back.size() == 20);
    for (std::size_t i = 0; i < 20; ++i) {
        CHECK(back[i].genotype == d[i].genotype);
        CHECK(back[i].fitness == d[i].fitness);
        CHECK(back[i].behaviour == d[i].behaviour);
    }
    std::stringstream bad("x0,fitness\n1,abc\n");
    CHECK_THROWS_AS(read_dataset_csv(bad), InvalidArgument);
}

TEST_CASE("records csv round trip and status text") {
    std::vector<RunRecord> recs{{0, 100, 5, 0.1, FeatureStatus::ok},
                                {0, 100, 8, std::nullopt, FeatureStatus::insufficient_samples},
                                {1, 200, 37, std::nullopt, FeatureStatus::degenerate_data}};
    std::stringstream ss;
    write_records_csv(ss, recs);
    const std::string text = ss.str();
    CHECK(text.rfind(std::string(records_header) + "\n", 0) == 0);
    CHECK(text.find("0,100,f8,,insufficient-samples") != std::string::npos);
    CHECK(text.find("1,200,f37,,degenerate-data") != std::string::npos);
    CHECK(read_records_csv(ss) == recs);
    CHECK(format_real(0.1) == "0.10000000000000001");
}

}

TEST_SUITE("harness") {

TEST_CASE("one run, one checkpoint, distr only: three records") {
    auto c = small_config();
    c.runs = 1;
    c.checkpoints = {100};
    c.features = {FeatureGroup::distr};
    const auto recs = run_experiment(c);
    CHECK(recs.size() == 3);
}

TEST_CASE("record count, ordering and uniqueness") {
    const auto c = small_config();
    const auto recs = run_experiment(c);
    std::size_t codes = 0;
    for (auto g : c.features)
        codes += group_features(g).size();
    CHECK(recs.size() == c.runs * c.checkpoints.size() * codes);
    CHECK(std::is_sorted(recs.begin(), recs.end(), record_less));
    for (std::size_t i = 1; i < recs.size(); ++i)
        REQUIRE(record_less(recs[i - 1], recs[i]));
}

TEST_CASE("lhs sampler records a single checkpoint at the archive size") {
    auto c = small_config();
    c.sampler = SamplerKind::lhs;
    c.checkpoints.clear();
    const auto recs = run_experiment(c);
    REQUIRE_FALSE(recs.empty());
    for (const auto& r : recs)
        REQUIRE(r.eval_count == c.archive_size);
}

TEST_CASE("thread count does not change results, and files are byte identical") {
    const auto c = small_config();
    CHECK(run_experiment(c, {1, std::nullopt}) == run_experiment(c, {3, std::nullopt}));
    TempDir dir("det");
    run_experiment_to_file(c, dir.path / "a.csv", 1);
    run_experiment_to_file(c, dir.path / "b.csv", 2);
    CHECK(slurp(dir.path / "a.csv") == slurp(dir.path / "b.csv"));
    CHECK_FALSE(fs::exists(dir.path / "a.csv.tmp"));
}

TEST_CASE("aggregate") {
    auto one = synthetic({4.0});
    auto rows = aggregate(one, 5);
    REQUIRE(rows.size() == 1);
    CHECK((rows[0].stats->median == 4.0 && rows[0].stats->q1 == 4.0 && rows[0].stats->q3 == 4.0));
    auto five = synthetic({5, 3, 1, 4, 2});
    five.push_back({9, 100, 5, std::nullopt, FeatureStatus::degenerate_data});
    five.push_back({0, 300, 5, std::nullopt, FeatureStatus::degenerate_data});
    rows = aggregate(five, 5);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].eval_count == 100);
    CHECK(rows[0].stats->median == 3.0);
    CHECK(rows[0].stats->q1 == 2.0);
    CHECK(rows[0].stats->q3 == 4.0);
    CHECK(rows[0].defined == 5);
    CHECK_FALSE(rows[1].stats.has_value());
    // Run order does not matter.
    std::reverse(five.begin(), five.end());
    CHECK(aggregate(five, 5)[0].stats->median == 3.0);
}

TEST_CASE("compare") {
    const auto a = synthetic({1, 2, 3}), b = synthetic({4, 5, 6});
    CHECK(compare(a, a, 5, 100).test.p_value == 1.0);
    const auto c = compare(a, b, 5, 100);
    CHECK(c.test.p_value == doctest::Approx(0.1));
    CHECK(c.median_a == 2.0);
    CHECK(c.median_b == 5.0);
    const auto later = synthetic({4, 5, 6}, 1000);
    CHECK(compare(a, 100, later, 1000, 5).test.p_value == doctest::Approx(0.1));
    CHECK_THROWS_AS(compare(a, b, 5, 200), InvalidArgument);
    CHECK_THROWS_AS(compare(a, b, 6, 100), InvalidArgument);
    auto with_gap = a;
    with_gap.push_back({7, 100, 5, std::nullopt, FeatureStatus::degenerate_data});
    CHECK(compare(with_gap, b, 5, 100).excluded_a == 1);
}

}

TEST_SUITE("plot") {

TEST_CASE("svg: single point series, band and dashed marker") {
    PlotSpec spec;
    spec.feature = 5;
    spec.series.push_back({"qd", aggregate(synthetic({2.0}), 5)});
    spec.marker = 100;
    const auto svg = render_svg(spec);
    CHECK(svg.rfind("<?xml", 0) == 0);
    const std::regex point("<circle[^>]*class=\"point\"");
    CHECK(std::distance(std::sregex_iterator(svg.begin(), svg.end(), point), std::sregex_iterator()) == 1);
    const std::regex marker("<line[^>]*class=\"marker\"[^>]*stroke-dasharray");
    CHECK(std::distance(std::sregex_iterator(svg.begin(), svg.end(), marker), std::sregex_iterator()) == 1);
    CHECK(svg.find("href") == std::string::npos);
    // Tags balance: every opened element closes.
    int depth = 0;
    const std::regex tag("<(/?)([a-zA-Z]+)[^>]*?(/?)>");
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), tag); it != std::sregex_iterator(); ++it) {
        if ((*it)[1].length())
            --depth;
        else if (!(*it)[3].length())
            ++depth;
        REQUIRE(depth >= 0);
    }
    CHECK(depth == 0);
}

TEST_CASE("plot data csv matches the aggregate") {
    auto recs = synthetic({1, 2, 3, 4, 5});
    auto more = synthetic({2, 4, 6}, 1000);
    recs.insert(recs.end(), more.begin(), more.end());
    const std::vector<PlotSeries> series{{"qd", aggregate(recs, 5)}};
    const auto csv = aggregate_csv(series);
    CHECK(csv == "series,eval_count,median,q1,q3,defined\nqd,100,3,2,4,5\nqd,1000,4,3,5,3\n");
}

}

TEST_SUITE("cli") {

TEST_CASE("run: writes records and resolved config; deterministic; bad configs exit 2") {
    TempDir dir("cli_run");
    spit(dir.path / "c.yaml", minimal_yaml);
    REQUIRE(cli({"run", "--config", (dir.path / "c.yaml").string(), "--out", (dir.path / "o1").string()}) == exit_ok);
    REQUIRE(cli({"run", "--config", (dir.path / "c.yaml").string(), "--out", (dir.path / "o2").string()}) == exit_ok);
    CHECK(fs::exists(dir.path / "o1" / "records.csv"));
    CHECK(slurp(dir.path / "o1" / "records.csv") == slurp(dir.path / "o2" / "records.csv"));
    const auto resolved = slurp(dir.path / "o1" / "config.resolved.yaml");
    CHECK(resolved.find("batch: 100") != std::string::npos);
    CHECK(resolved.find("checkpoints:") != std::string::npos);
    CHECK(parse_config(resolved).runs == 2);

    spit(dir.path / "bad.yaml", std::string(minimal_yaml) + "colour: red\n");
    std::string err;
    CHECK(cli({"run", "--config", (dir.path / "bad.yaml").string(), "--out", (dir.path / "o3").string()}, nullptr, &err) == exit_usage);
    CHECK(err.find("line 8") != std::string::npos);
    CHECK(cli({"run", "--config", (dir.path / "missing.yaml").string(), "--out", (dir.path / "o4").string()}) == exit_io);
    CHECK(cli({"frobnicate"}) == exit_usage);
}

TEST_CASE("features: line format, objective requirement, linear meta") {
    TempDir dir("cli_feat");
    Rng r(3);
    std::vector<Sample> s;
    for (int i = 0; i < 60; ++i) {
        const double x0 = r.uniform(-5, 5), x1 = r.uniform(-5, 5);
        s.push_back({{x0, x1}, 2 * x0 + 3 * x1 + 1, std::nullopt});
    }
    std::ofstream out(dir.path / "lin.csv");
    write_dataset_csv(out, Dataset(s));
    out.close();
    const auto ds = (dir.path / "lin.csv").string();
    std::string text;
    REQUIRE(cli({"features", "--dataset", ds, "--groups", "distr"}, &text) == exit_ok);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
    CHECK(text.rfind("f5,", 0) == 0);
    CHECK(cli({"features", "--dataset", ds, "--groups", "conv"}) == exit_usage);
    REQUIRE(cli({"features", "--dataset", ds, "--groups", "meta"}, &text) == exit_ok);
    const auto at = text.find("f24,");
    REQUIRE(at != std::string::npos);
    CHECK(std::abs(std::stod(text.substr(at + 4)) - 1.0) < 1e-9);
    REQUIRE(cli({"features", "--dataset", ds, "--groups", "conv,local", "--domain", "sphere", "--dim", "2"}, &text) == exit_ok);
    CHECK(text.find("f22,") != std::string::npos);
    CHECK(cli({"features", "--dataset", ds, "--groups", "conv", "--domain", "sphere", "--dim", "3"}) == exit_usage);
    CHECK(cli({"features", "--dataset", (dir.path / "none.csv").string(), "--groups", "distr"}) == exit_io);
}

TEST_CASE("compare and plot commands") {
    TempDir dir("cli_cmp");
    {
        std::ofstream a(dir.path / "a.csv"), b(dir.path / "b.csv");
        write_records_csv(a, synthetic({1, 2, 3}));
        write_records_csv(b, synthetic({4, 5, 6}));
    }
    const auto a = (dir.path / "a.csv").string(), b = (dir.path / "b.csv").string();
    std::string text;
    REQUIRE(cli({"compare", "--a", a, "--b", a, "--feature", "f5", "--at", "100"}, &text) == exit_ok);
    CHECK(text.find("feature,U,p,n_a,n_b,median_a,median_b\n") == 0);
    CHECK(text.find("\nf5,4.5,1,3,3,2,2") != std::string::npos);
    REQUIRE(cli({"compare", "--a", a, "--b", b, "--feature", "f5", "--at", "100"}, &text) == exit_ok);
    CHECK(text.find("\nf5,0,0.1") != std::string::npos);
    CHECK(cli({"compare", "--a", a, "--b", b, "--feature", "f99", "--at", "100"}) == exit_usage);
    CHECK(cli({"compare", "--a", a, "--b", b, "--feature", "f5", "--at", "200"}) == exit_usage);

    const auto svg = dir.path / "plot" / "f5.svg";
    REQUIRE(cli({"plot", "--in", a, b, "--feature", "f5", "--out", svg.string(), "--marker", "100"}) == exit_ok);
    CHECK(fs::exists(svg));
    const auto csv = slurp(dir.path / "plot" / "f5.csv");
    const std::vector<PlotSeries> expect{{"a", aggregate(synthetic({1, 2, 3}), 5)},
                                         {"b", aggregate(synthetic({4, 5, 6}), 5)}};
    CHECK(csv == aggregate_csv(expect));
    CHECK(cli({"plot", "--in", a, "--feature", "f6", "--out", svg.string()}) == exit_usage);
}

}
