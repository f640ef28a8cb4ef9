#include "qdela/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "qdela/error.hpp"

namespace qdela {

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ','))
        out.push_back(cell);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
}

double parse_real(const std::string& s, std::size_t line_no) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc{} || ptr != end)
        throw InvalidArgument("line " + std::to_string(line_no) + ": '" + s + "' is not a number");
    return v;
}

std::size_t parse_count(const std::string& s, std::size_t line_no) {
    std::size_t v = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc{} || ptr != end)
        throw InvalidArgument("line " + std::to_string(line_no) + ": '" + s + "' is not a count");
    return v;
}

} // namespace

void write_dataset_csv(std::ostream& os, const Dataset& data) {
    for (std::size_t j = 0; j < data.dim(); ++j)
        os << 'x' << j << ',';
    os << "fitness,b0,b1\n";
    for (const auto& s : data.samples()) {
        for (double v : s.genotype)
            os << format_real(v) << ',';
        os << format_real(s.fitness) << ',';
        if (s.behaviour)
            os << format_real((*s.behaviour)[0]) << ',' << format_real((*s.behaviour)[1]);
        else
            os << ',';
        os << '\n';
    }
}

Dataset read_dataset_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line))
        throw InvalidArgument("dataset: missing header");
    strip_cr(line);
    const auto header = split(line);
    std::size_t d = 0;
    while (d < header.size() && header[d] == "x" + std::to_string(d))
        ++d;
    const bool has_behaviour = header.size() == d + 3;
    if (d == 0 || d >= header.size() || header[d] != "fitness" ||
        !(header.size() == d + 1 || (has_behaviour && header[d + 1] == "b0" && header[d + 2] == "b1")))
        throw InvalidArgument("dataset: header must be x0,...,x{d-1},fitness[,b0,b1]");

    std::vector<Sample> samples;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty())
            continue;
        const auto cells = split(line);
        if (cells.size() != header.size())
            throw InvalidArgument("dataset: line " + std::to_string(line_no) + " has " +
                                  std::to_string(cells.size()) + " fields, expected " +
                                  std::to_string(header.size()));
        Sample s;
        for (std::size_t j = 0; j < d; ++j)
            s.genotype.push_back(parse_real(cells[j], line_no));
        s.fitness = parse_real(cells[d], line_no);
        if (has_behaviour && !(cells[d + 1].empty() && cells[d + 2].empty()))
            s.behaviour = Behaviour{parse_real(cells[d + 1], line_no), parse_real(cells[d + 2], line_no)};
        samples.push_back(std::move(s));
    }
    return Dataset(std::move(samples));
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read dataset " + path.string());
    return read_dataset_csv(in);
}

std::string format_record(const RunRecord& r) {
    std::string out = std::to_string(r.run_id) + ',' + std::to_string(r.eval_count) + ',' +
                      feature_code(r.feature) + ',';
    if (r.value)
        out += format_real(*r.value);
    out += ',';
    out += to_string(r.status);
    return out;
}

void write_records_csv(std::ostream& os, const std::vector<RunRecord>& records) {
    os << records_header << '\n';
    for (const auto& r : records)
        os << format_record(r) << '\n';
}

std::vector<RunRecord> read_records_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line))
        throw InvalidArgument("records: missing header");
    strip_cr(line);
    if (line != records_header)
        throw InvalidArgument(std::string("records: header must be ") + records_header);
    std::vector<RunRecord> out;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty())
            continue;
        const auto cells = split(line);
        if (cells.size() != 5)
            throw InvalidArgument("records: line " + std::to_string(line_no) + " needs 5 fields");
        RunRecord r;
        r.run_id = parse_count(cells[0], line_no);
        r.eval_count = parse_count(cells[1], line_no);
        const auto code = parse_feature_code(cells[2]);
        if (!code)
            throw InvalidArgument("records: line " + std::to_string(line_no) + ": unknown feature '" +
                                  cells[2] + "'");
        r.feature = *code;
        r.status = parse_status(cells[4]);
        if (r.status == FeatureStatus::ok)
            r.value = parse_real(cells[3], line_no);
        else if (!cells[3].empty())
            throw InvalidArgument("records: line " + std::to_string(line_no) +
                                  ": value must be empty unless status is ok");
        out.push_back(r);
    }
    return out;
}

std::vector<RunRecord> read_records_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read records " + path.string());
    return read_records_csv(in);
}

} // namespace qdela
