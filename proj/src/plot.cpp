#include "memdiff/plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace memdiff {

namespace {

constexpr double kW = 720.0, kH = 480.0;
constexpr double kLeft = 80.0, kRight = 25.0, kTop = 40.0, kBottom = 55.0;

struct Axis {
    double lo = 0.0, hi = 1.0;
    void grow(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
};

std::string num(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

// Clip nonpositive values before a log transform; returns true if anything
// was clipped so the plot can carry an annotation.
bool log10_clipped(std::vector<double>& v) {
    double min_pos = std::numeric_limits<double>::infinity();
    for (double x : v)
        if (x > 0.0) min_pos = std::min(min_pos, x);
    const double floor_value = std::isfinite(min_pos) ? min_pos * 0.1 : 1e-300;
    bool clipped = false;
    for (double& x : v) {
        if (x <= 0.0) {
            x = std::log10(floor_value);
            clipped = true;
        } else {
            x = std::log10(x);
        }
    }
    return clipped;
}

void emit_series(std::ostringstream& svg, const std::vector<double>& xs,
                 const std::vector<double>& ys, const Axis& ax, const Axis& ay,
                 const std::string& color) {
    auto px = [&](double x) {
        const double span = (ax.hi > ax.lo) ? ax.hi - ax.lo : 1.0;
        return kLeft + (x - ax.lo) / span * (kW - kLeft - kRight);
    };
    auto py = [&](double y) {
        const double span = (ay.hi > ay.lo) ? ay.hi - ay.lo : 1.0;
        return kH - kBottom - (y - ay.lo) / span * (kH - kTop - kBottom);
    };
    if (xs.size() == 1) {
        svg << "<circle cx='" << num(px(xs[0])) << "' cy='" << num(py(ys[0]))
            << "' r='4' fill='" << color << "'/>\n";
        return;
    }
    svg << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < xs.size(); ++i)
        svg << num(px(xs[i])) << "," << num(py(ys[i])) << " ";
    svg << "'/>\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
        svg << "<circle cx='" << num(px(xs[i])) << "' cy='" << num(py(ys[i])) << "' r='2.2' fill='"
            << color << "'/>\n";
}

void emit_frame(std::ostringstream& svg, const Axis& ax, const Axis& ay,
                const std::string& xlabel, const std::string& ylabel, const std::string& title) {
    svg << "<rect x='" << num(kLeft) << "' y='" << num(kTop) << "' width='"
        << num(kW - kLeft - kRight) << "' height='" << num(kH - kTop - kBottom)
        << "' fill='none' stroke='black'/>\n";
    svg << "<text x='" << num(kW / 2) << "' y='22' text-anchor='middle' font-size='15'>" << title
        << "</text>\n";
    svg << "<text x='" << num(kW / 2) << "' y='" << num(kH - 12)
        << "' text-anchor='middle' font-size='13'>" << xlabel << "</text>\n";
    svg << "<text x='18' y='" << num(kH / 2)
        << "' text-anchor='middle' font-size='13' transform='rotate(-90 18 " << num(kH / 2)
        << ")'>" << ylabel << "</text>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = ax.lo + (ax.hi - ax.lo) * i / 4.0;
        const double fy = ay.lo + (ay.hi - ay.lo) * i / 4.0;
        const double pxv = kLeft + (kW - kLeft - kRight) * i / 4.0;
        const double pyv = kH - kBottom - (kH - kTop - kBottom) * i / 4.0;
        svg << "<line x1='" << num(pxv) << "' y1='" << num(kH - kBottom) << "' x2='" << num(pxv)
            << "' y2='" << num(kH - kBottom + 5) << "' stroke='black'/>\n";
        svg << "<text x='" << num(pxv) << "' y='" << num(kH - kBottom + 18)
            << "' text-anchor='middle' font-size='11'>" << num(fx) << "</text>\n";
        svg << "<line x1='" << num(kLeft - 5) << "' y1='" << num(pyv) << "' x2='" << num(kLeft)
            << "' y2='" << num(pyv) << "' stroke='black'/>\n";
        svg << "<text x='" << num(kLeft - 8) << "' y='" << num(pyv + 4)
            << "' text-anchor='end' font-size='11'>" << num(fy) << "</text>\n";
    }
}

}  // namespace

std::string render_plot(const CsvTable& table, PlotKind kind) {
    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW << "' height='" << kH
        << "' viewBox='0 0 " << kW << " " << kH << "'>\n";
    svg << "<rect width='100%' height='100%' fill='white'/>\n";

    bool clipped = false;
    if (kind == PlotKind::Energy) {
        const auto t = table.column("t");
        auto e1 = table.column("E1");
        auto e2 = table.column("E2");
        clipped = log10_clipped(e1);
        clipped = log10_clipped(e2) || clipped;
        Axis ax, ay;
        ax.lo = ax.hi = t.empty() ? 0.0 : t[0];
        ay.lo = ay.hi = e1.empty() ? 0.0 : e1[0];
        for (double v : t) ax.grow(v);
        for (double v : e1) ay.grow(v);
        for (double v : e2) ay.grow(v);
        emit_frame(svg, ax, ay, "t", "log10 energy", "energy decay");
        emit_series(svg, t, e1, ax, ay, "#1f6fb2");
        emit_series(svg, t, e2, ax, ay, "#b2451f");
        svg << "<text x='" << num(kW - kRight - 10) << "' y='" << num(kTop + 16)
            << "' text-anchor='end' font-size='12' fill='#1f6fb2'>E1</text>\n";
        svg << "<text x='" << num(kW - kRight - 10) << "' y='" << num(kTop + 32)
            << "' text-anchor='end' font-size='12' fill='#b2451f'>E2</text>\n";
    } else {
        auto lam = table.column("lambda_next");
        auto sup = table.column("sup_tail");
        clipped = log10_clipped(sup);
        clipped = log10_clipped(lam) || clipped;
        Axis ax, ay;
        ax.lo = ax.hi = lam.empty() ? 0.0 : lam[0];
        ay.lo = ay.hi = sup.empty() ? 0.0 : sup[0];
        for (double v : lam) ax.grow(v);
        for (double v : sup) ay.grow(v);
        emit_frame(svg, ax, ay, "log10 lambda_{m+1}", "log10 sup tail energy", "spectral tail decay");
        emit_series(svg, lam, sup, ax, ay, "#1f6fb2");
    }
    if (clipped)
        svg << "<text x='" << num(kLeft + 8) << "' y='" << num(kTop + 16)
            << "' font-size='11' fill='#777'>zeros clipped to plot floor</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

void plot_series(const std::string& csv_path, PlotKind kind, const std::string& out_path) {
    write_text_file(out_path, render_plot(read_csv(csv_path), kind));
}

}  // namespace memdiff
