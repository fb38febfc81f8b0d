#pragma once

#include <string>
#include <vector>

#include "memdiff/solver.hpp"

namespace memdiff {

/// Shortest decimal form that round-trips the double exactly.
std::string format_double(double v);

/// Diagnostics CSV column order (fixed):
/// t,u_l2_sq,u_h1_sq,u_h2_sq,eta_mu1_sq,eta_mu2_sq,E1,E2,lyapunov,tail_E_m{cutoff}...
std::string csv_header(const std::vector<std::size_t>& tail_cutoffs);
std::string render_csv(const std::vector<EnergyRecord>& records,
                       const std::vector<std::size_t>& tail_cutoffs);
void write_csv(const std::vector<EnergyRecord>& records,
               const std::vector<std::size_t>& tail_cutoffs, const std::string& path);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<double> column(const std::string& name) const;  // throws on unknown column
};
CsvTable read_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace memdiff
