#pragma once

#include <string>
#include <vector>

#include "memdiff/report_io.hpp"

namespace memdiff {

enum class PlotKind {
    Energy,  // log-linear: t against log10 E1, E2 from a diagnostics CSV
    Tail,    // log-log: lambda_next against sup_tail from a tail CSV
};

std::string render_plot(const CsvTable& table, PlotKind kind);
void plot_series(const std::string& csv_path, PlotKind kind, const std::string& out_path);

}  // namespace memdiff
