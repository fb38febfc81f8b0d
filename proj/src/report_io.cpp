#include "memdiff/report_io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace memdiff {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string csv_header(const std::vector<std::size_t>& tail_cutoffs) {
    std::string h = "t,u_l2_sq,u_h1_sq,u_h2_sq,eta_mu1_sq,eta_mu2_sq,E1,E2,lyapunov";
    for (std::size_t c : tail_cutoffs) h += ",tail_E_m" + std::to_string(c);
    return h;
}

std::string render_csv(const std::vector<EnergyRecord>& records,
                       const std::vector<std::size_t>& tail_cutoffs) {
    std::string out = csv_header(tail_cutoffs);
    out += "\n";
    for (const auto& r : records) {
        out += format_double(r.t);
        for (double v : {r.u_l2_sq, r.u_h1_sq, r.u_h2_sq, r.eta_mu1_sq, r.eta_mu2_sq, r.e1, r.e2,
                         r.lyapunov}) {
            out += ",";
            out += format_double(v);
        }
        for (std::size_t i = 0; i < tail_cutoffs.size(); ++i) {
            out += ",";
            out += format_double(i < r.tails.size() ? r.tails[i] : 0.0);
        }
        out += "\n";
    }
    return out;
}

void write_csv(const std::vector<EnergyRecord>& records,
               const std::vector<std::size_t>& tail_cutoffs, const std::string& path) {
    write_text_file(path, render_csv(records, tail_cutoffs));
}

std::vector<double> CsvTable::column(const std::string& name) const {
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c] != name) continue;
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& row : rows) out.push_back(row[c]);
        return out;
    }
    throw Error("csv: no column named " + name);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open csv: " + path);
    CsvTable table;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            cells.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (header) {
            table.columns = cells;
            header = false;
            continue;
        }
        if (cells.size() != table.columns.size()) throw Error("csv: ragged row in " + path);
        std::vector<double> row;
        for (const auto& cell : cells) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str()) throw Error("csv: non-numeric cell in " + path);
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    if (table.columns.empty()) throw Error("csv: missing header in " + path);
    return table;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace memdiff
