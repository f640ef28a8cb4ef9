#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qdela/harness.hpp"

namespace qdela {

struct PlotSeries {
    std::string label;
    std::vector<AggregateRow> rows;
};

struct PlotSpec {
    int feature = 0;
    std::vector<PlotSeries> series;
    bool log_x = true;
    /// Dashed vertical line at this evaluation count.
    std::optional<std::size_t> marker;
};

/// Standalone SVG: per series a median line over a shaded q1-q3 band.
std::string render_svg(const PlotSpec& spec);

/// The plotted numbers: series,eval_count,median,q1,q3,defined.
std::string aggregate_csv(const std::vector<PlotSeries>& series);

} // namespace qdela
