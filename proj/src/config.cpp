#include "qdela/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "qdela/error.hpp"

namespace qdela {

std::string_view to_string(SamplerKind s) {
    switch (s) {
    case SamplerKind::lhs: return "lhs";
    case SamplerKind::qd_gaussian: return "qd-gaussian";
    case SamplerKind::qd_isolinedd: return "qd-isolinedd";
    }
    return "?";
}

SamplerKind parse_sampler(std::string_view s) {
    for (auto k : {SamplerKind::lhs, SamplerKind::qd_gaussian, SamplerKind::qd_isolinedd}) {
        if (s == to_string(k))
            return k;
    }
    throw InvalidArgument("unknown sampler '" + std::string(s) + "'");
}

std::vector<std::size_t> default_checkpoints(std::size_t batch, std::size_t budget,
                                             std::size_t archive_size) {
    std::vector<std::size_t> out;
    if (batch == 0 || budget < batch)
        return out;
    for (std::size_t decade = 1; decade <= budget; decade *= 10) {
        for (std::size_t step : {1, 2, 5}) {
            const std::size_t v = step * decade;
            if (v >= batch && v <= budget && v % batch == 0)
                out.push_back(v);
        }
        if (decade > budget / 10)
            break;
    }
    if (archive_size <= budget && archive_size % batch == 0)
        out.push_back(archive_size);
    out.push_back(budget);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

struct Issue {
    std::string field;
    std::string message;
};

std::optional<Issue> find_issue(const ExperimentConfig& c) {
    static const std::set<std::size_t> dims{2, 4, 8, 16, 32};
    static const std::set<std::size_t> sizes{100, 1000, 10000};
    if (!dims.count(c.dim))
        return Issue{"dim", "dim must be one of 2, 4, 8, 16, 32"};
    if (!sizes.count(c.archive_size))
        return Issue{"archive_size", "archive_size must be one of 100, 1000, 10000"};
    const bool arm_pair = (c.domain == Domain::arm) == (c.behaviour == BehaviourKind::arm);
    if (!arm_pair) {
        return Issue{"behaviour", "behaviour '" + std::string(to_string(c.behaviour)) +
                                      "' is not available for domain '" + std::string(to_string(c.domain)) + "'"};
    }
    if (c.batch == 0)
        return Issue{"batch", "batch must be positive"};
    if (c.budget == 0 || c.budget % c.batch != 0)
        return Issue{"budget", "budget must be a positive multiple of batch"};
    if (c.runs == 0)
        return Issue{"runs", "runs must be at least 1"};
    for (std::size_t i = 0; i < c.checkpoints.size(); ++i) {
        const auto cp = c.checkpoints[i];
        if (cp < c.batch || cp > c.budget || cp % c.batch != 0)
            return Issue{"checkpoints", "checkpoint " + std::to_string(cp) +
                                            " must be a multiple of batch within [batch, budget]"};
        if (i > 0 && cp <= c.checkpoints[i - 1])
            return Issue{"checkpoints", "checkpoints must be strictly increasing"};
    }
    if (c.op.sigma < 0.0 || c.op.sigma1 < 0.0 || c.op.sigma2 < 0.0)
        return Issue{"operator", "operator sigmas must be non-negative"};
    if (c.ela.conv_pairs == 0)
        return Issue{"ela", "ela.conv_pairs must be positive"};
    if (c.ela.local_starts == 1)
        return Issue{"ela", "ela.local_starts must be at least 2 (0 selects the default)"};
    if (c.ela.local_max_evals == 0)
        return Issue{"ela", "ela.local_max_evals must be positive"};
    if (c.ela.level_folds < 2)
        return Issue{"ela", "ela.level_folds must be at least 2"};
    if (c.features.empty())
        return Issue{"features", "at least one feature group must be selected"};
    return std::nullopt;
}

const std::set<std::string> top_keys{"domain",   "behaviour",  "dim",         "archive_size", "sampler",
                                     "budget",   "batch",      "runs",        "base_seed",    "checkpoints",
                                     "operator", "ela",        "features"};
const std::set<std::string> operator_keys{"sigma", "sigma1", "sigma2"};
const std::set<std::string> ela_keys{"conv_pairs", "local_starts", "local_max_evals", "level_folds"};

std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

int line_of(const YAML::Node& n) {
    return n.Mark().line + 1;
}

template <typename T>
T scalar_as(const YAML::Node& n, const std::string& key) {
    if (!n.IsScalar())
        throw ConfigError("'" + key + "' must be a scalar", line_of(n));
    try {
        return n.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError("'" + key + "' has an invalid value '" + n.Scalar() + "'", line_of(n));
    }
}

std::size_t count_as(const YAML::Node& n, const std::string& key) {
    const auto text = scalar_as<std::string>(n, key);
    if (text.empty() || text.front() == '-')
        throw ConfigError("'" + key + "' must be a non-negative integer", line_of(n));
    return scalar_as<std::size_t>(n, key);
}

template <typename Parse>
auto parse_name(const YAML::Node& n, const std::string& key, Parse parse) {
    const auto text = scalar_as<std::string>(n, key);
    try {
        return parse(text);
    } catch (const Error& e) {
        throw ConfigError(e.what(), line_of(n));
    }
}

void check_keys(const YAML::Node& map, const std::set<std::string>& allowed, const std::string& where) {
    if (!map.IsMap())
        throw ConfigError("'" + where + "' must be a mapping", line_of(map));
    for (const auto& kv : map) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.count(key))
            throw ConfigError("unknown key '" + key + "' in " + where, line_of(kv.first));
    }
}

} // namespace

void ExperimentConfig::validate() const {
    if (auto issue = find_issue(*this))
        throw ConfigError(issue->message);
}

ExperimentConfig ExperimentConfig::resolved() const {
    ExperimentConfig r = *this;
    if (r.checkpoints.empty())
        r.checkpoints = default_checkpoints(batch, budget, archive_size);
    r.ela.local_starts = ela.resolved_local_starts(dim);
    return r;
}

OperatorConfig ExperimentConfig::operator_config() const {
    OperatorConfig o = op;
    o.kind = sampler == SamplerKind::qd_gaussian ? OperatorKind::gaussian : OperatorKind::isolinedd;
    return o;
}

ExperimentConfig parse_config(std::string_view text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        throw ConfigError("malformed document: " + e.msg, e.mark.line + 1);
    }
    if (!root.IsMap())
        throw ConfigError("config must be a mapping of keys to values", root.IsDefined() ? line_of(root) : 1);
    check_keys(root, top_keys, "config");

    std::map<std::string, int> lines;
    for (const auto& kv : root)
        lines[kv.first.as<std::string>()] = line_of(kv.first);
    for (const char* key : {"domain", "dim", "archive_size", "sampler"}) {
        if (!root[key])
            throw ConfigError(std::string("missing required key '") + key + "'", 1);
    }

    ExperimentConfig c;
    c.domain = parse_name(root["domain"], "domain", parse_domain);
    c.behaviour = root["behaviour"] ? parse_name(root["behaviour"], "behaviour", parse_behaviour)
                                    : parse_behaviour(default_behaviour(c.domain));
    c.dim = count_as(root["dim"], "dim");
    c.archive_size = count_as(root["archive_size"], "archive_size");
    c.sampler = parse_name(root["sampler"], "sampler", parse_sampler);
    if (root["budget"])
        c.budget = count_as(root["budget"], "budget");
    if (root["batch"])
        c.batch = count_as(root["batch"], "batch");
    if (root["runs"])
        c.runs = count_as(root["runs"], "runs");
    if (root["base_seed"])
        c.base_seed = scalar_as<std::uint64_t>(root["base_seed"], "base_seed");
    if (const auto cps = root["checkpoints"]) {
        if (!cps.IsSequence())
            throw ConfigError("'checkpoints' must be a list", line_of(cps));
        for (const auto& n : cps)
            c.checkpoints.push_back(count_as(n, "checkpoints"));
    }
    if (const auto op = root["operator"]) {
        check_keys(op, operator_keys, "operator");
        if (op["sigma"])
            c.op.sigma = scalar_as<double>(op["sigma"], "sigma");
        if (op["sigma1"])
            c.op.sigma1 = scalar_as<double>(op["sigma1"], "sigma1");
        if (op["sigma2"])
            c.op.sigma2 = scalar_as<double>(op["sigma2"], "sigma2");
    }
    if (const auto ela = root["ela"]) {
        check_keys(ela, ela_keys, "ela");
        if (ela["conv_pairs"])
            c.ela.conv_pairs = count_as(ela["conv_pairs"], "conv_pairs");
        if (ela["local_starts"])
            c.ela.local_starts = count_as(ela["local_starts"], "local_starts");
        if (ela["local_max_evals"])
            c.ela.local_max_evals = count_as(ela["local_max_evals"], "local_max_evals");
        if (ela["level_folds"])
            c.ela.level_folds = count_as(ela["level_folds"], "level_folds");
    }
    if (const auto f = root["features"]) {
        std::string list;
        if (f.IsSequence()) {
            for (const auto& n : f)
                list += (list.empty() ? "" : ",") + scalar_as<std::string>(n, "features");
        } else {
            list = scalar_as<std::string>(f, "features");
        }
        try {
            c.features = parse_groups(list);
        } catch (const Error& e) {
            throw ConfigError(e.what(), line_of(f));
        }
    }

    if (auto issue = find_issue(c)) {
        const auto it = lines.find(issue->field);
        throw ConfigError(issue->message, it != lines.end() ? it->second : 1);
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string emit_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "domain: " << to_string(cfg.domain) << '\n'
       << "behaviour: " << to_string(cfg.behaviour) << '\n'
       << "dim: " << cfg.dim << '\n'
       << "archive_size: " << cfg.archive_size << '\n'
       << "sampler: " << to_string(cfg.sampler) << '\n'
       << "budget: " << cfg.budget << '\n'
       << "batch: " << cfg.batch << '\n'
       << "runs: " << cfg.runs << '\n'
       << "base_seed: " << cfg.base_seed << '\n'
       << "checkpoints: [";
    for (std::size_t i = 0; i < cfg.checkpoints.size(); ++i)
        os << (i ? ", " : "") << cfg.checkpoints[i];
    os << "]\n"
       << "operator:\n"
       << "  sigma: " << shortest(cfg.op.sigma) << '\n'
       << "  sigma1: " << shortest(cfg.op.sigma1) << '\n'
       << "  sigma2: " << shortest(cfg.op.sigma2) << '\n'
       << "ela:\n"
       << "  conv_pairs: " << cfg.ela.conv_pairs << '\n'
       << "  local_starts: " << cfg.ela.local_starts << '\n'
       << "  local_max_evals: " << cfg.ela.local_max_evals << '\n'
       << "  level_folds: " << cfg.ela.level_folds << '\n'
       << "features: [";
    for (std::size_t i = 0; i < cfg.features.size(); ++i)
        os << (i ? ", " : "") << to_string(cfg.features[i]);
    os << "]\n";
    return os.str();
}

} // namespace qdela
