#include "qdela/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "qdela/csv_io.hpp"

namespace qdela {

namespace {

constexpr double width = 720.0;
constexpr double height = 440.0;
constexpr double left = 70.0;
constexpr double right = 150.0;
constexpr double top = 40.0;
constexpr double bottom = 50.0;

const char* const palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                               "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

} // namespace

std::string render_svg(const PlotSpec& spec) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : spec.series) {
        for (const auto& r : s.rows) {
            if (!r.stats)
                continue;
            const auto x = static_cast<double>(r.eval_count);
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, r.stats->q1);
            ymax = std::max(ymax, r.stats->q3);
        }
    }
    if (!std::isfinite(xmin)) {
        xmin = 1.0;
        xmax = 10.0;
        ymin = 0.0;
        ymax = 1.0;
    }
    if (spec.marker) {
        xmin = std::min(xmin, static_cast<double>(*spec.marker));
        xmax = std::max(xmax, static_cast<double>(*spec.marker));
    }

    const bool log_x = spec.log_x && xmin > 0.0;
    auto xt = [&](double v) { return log_x ? std::log10(v) : v; };
    double lo_x = xt(xmin), hi_x = xt(xmax);
    if (hi_x - lo_x <= 0.0) {
        lo_x -= 0.5;
        hi_x += 0.5;
    }
    if (ymax - ymin <= 0.0) {
        const double pad = ymax != 0.0 ? std::abs(ymax) * 0.05 : 1.0;
        ymin -= pad;
        ymax += pad;
    } else {
        const double pad = (ymax - ymin) * 0.05;
        ymin -= pad;
        ymax += pad;
    }
    const double pw = width - left - right;
    const double ph = height - top - bottom;
    auto px = [&](double v) { return left + (xt(v) - lo_x) / (hi_x - lo_x) * pw; };
    auto py = [&](double v) { return top + (ymax - v) / (ymax - ymin) * ph; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n"
       << "<text x=\"" << num(left + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       << "font-size=\"16\">" << feature_code(spec.feature) << "</text>\n";

    // Axes and ticks.
    os << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n"
       << "<line x1=\"" << num(left) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(left + pw)
       << "\" y2=\"" << num(top + ph) << "\"/>\n"
       << "<line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left) << "\" y2=\""
       << num(top + ph) << "\"/>\n</g>\n";
    os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    if (log_x) {
        for (double e = std::ceil(lo_x); e <= std::floor(hi_x) + 1e-9; e += 1.0) {
            const double v = std::pow(10.0, e);
            const double x = px(v);
            os << "<line x1=\"" << num(x) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(x) << "\" y2=\""
               << num(top + ph + 5) << "\" stroke=\"black\"/>\n"
               << "<text x=\"" << num(x) << "\" y=\"" << num(top + ph + 18) << "\" text-anchor=\"middle\">1e"
               << static_cast<int>(e) << "</text>\n";
        }
    } else {
        for (int i = 0; i <= 4; ++i) {
            const double v = lo_x + (hi_x - lo_x) * i / 4.0;
            const double x = left + pw * i / 4.0;
            os << "<text x=\"" << num(x) << "\" y=\"" << num(top + ph + 18) << "\" text-anchor=\"middle\">"
               << tick_label(v) << "</text>\n";
        }
    }
    for (int i = 0; i <= 4; ++i) {
        const double v = ymin + (ymax - ymin) * i / 4.0;
        const double y = py(v);
        os << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left) << "\" y2=\""
           << num(y) << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << num(left - 8) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">"
           << tick_label(v) << "</text>\n";
    }
    os << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(height - 10)
       << "\" text-anchor=\"middle\">evaluations</text>\n</g>\n";

    for (std::size_t si = 0; si < spec.series.size(); ++si) {
        const auto& s = spec.series[si];
        const char* colour = palette[si % std::size(palette)];
        std::vector<const AggregateRow*> rows;
        for (const auto& r : s.rows) {
            if (r.stats)
                rows.push_back(&r);
        }
        os << "<g class=\"series\" data-label=\"" << escape(s.label) << "\">\n";
        if (!rows.empty()) {
            os << "<polygon class=\"band\" fill=\"" << colour << "\" fill-opacity=\"0.25\" stroke=\"none\" points=\"";
            for (const auto* r : rows)
                os << num(px(static_cast<double>(r->eval_count))) << ',' << num(py(r->stats->q1)) << ' ';
            for (auto it = rows.rbegin(); it != rows.rend(); ++it)
                os << num(px(static_cast<double>((*it)->eval_count))) << ',' << num(py((*it)->stats->q3)) << ' ';
            os << "\"/>\n";
            os << "<polyline class=\"median\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
            for (const auto* r : rows)
                os << num(px(static_cast<double>(r->eval_count))) << ',' << num(py(r->stats->median)) << ' ';
            os << "\"/>\n";
            for (const auto* r : rows) {
                os << "<circle class=\"point\" cx=\"" << num(px(static_cast<double>(r->eval_count))) << "\" cy=\""
                   << num(py(r->stats->median)) << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
            }
        }
        const double ly = top + 10 + 18.0 * static_cast<double>(si);
        os << "<line x1=\"" << num(left + pw + 12) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(left + pw + 32)
           << "\" y2=\"" << num(ly) << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n"
           << "<text x=\"" << num(left + pw + 36) << "\" y=\"" << num(ly + 4)
           << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(s.label) << "</text>\n";
        os << "</g>\n";
    }

    if (spec.marker) {
        const double x = px(static_cast<double>(*spec.marker));
        os << "<line class=\"marker\" x1=\"" << num(x) << "\" y1=\"" << num(top) << "\" x2=\"" << num(x)
           << "\" y2=\"" << num(top + ph) << "\" stroke=\"black\" stroke-dasharray=\"6,4\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string aggregate_csv(const std::vector<PlotSeries>& series) {
    std::ostringstream os;
    os << "series,eval_count,median,q1,q3,defined\n";
    for (const auto& s : series) {
        for (const auto& r : s.rows) {
            os << s.label << ',' << r.eval_count << ',';
            if (r.stats)
                os << format_real(r.stats->median) << ',' << format_real(r.stats->q1) << ','
                   << format_real(r.stats->q3);
            else
                os << ",,";
            os << ',' << r.defined << '\n';
        }
    }
    return os.str();
}

} // namespace qdela
