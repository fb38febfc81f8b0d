#include "memdiff/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "memdiff/errors.hpp"

namespace memdiff {

double KernelSpec::mu(double s) const {
    double v = 0.0;
    for (const auto& t : terms) v += t.amplitude * std::exp(-t.rate * s);
    return v;
}

double KernelSpec::mu_prime(double s) const {
    double v = 0.0;
    for (const auto& t : terms) v -= t.amplitude * t.rate * std::exp(-t.rate * s);
    return v;
}

double KernelSpec::mass() const {
    double v = 0.0;
    for (const auto& t : terms) v += t.amplitude / t.rate;
    return v;
}

double KernelSpec::truncated_mass() const {
    double v = 0.0;
    for (const auto& t : terms) v += t.amplitude / t.rate * (1.0 - std::exp(-t.rate * s_max));
    return v;
}

std::string KernelReport::summary() const {
    std::ostringstream out;
    out << (pass ? "pass" : "fail") << " (delta = " << delta << ")";
    for (const auto& c : checks) {
        out << "\n  [" << (c.pass ? "ok" : "FAIL") << "] " << c.condition;
        if (!c.pass && c.offending_s >= 0.0) out << " at s = " << c.offending_s;
    }
    return out.str();
}

namespace {

void check_terms_or_throw(const std::vector<KernelTerm>& terms) {
    if (terms.empty())
        throw InvalidSpecError("kernel: term list is empty; mu(s) in C^1(R+) cap L^1(R+) requires at least one term");
    double total = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].amplitude < 0.0)
            throw InvalidSpecError("kernel term " + std::to_string(i) +
                                   ": amplitude must be >= 0 (mu(s) >= 0 fails otherwise)");
        if (!(terms[i].rate > 0.0))
            throw InvalidSpecError("kernel term " + std::to_string(i) +
                                   ": decay rate must be > 0, otherwise mu(s) in C^1(R+) cap L^1(R+) fails");
        total += terms[i].amplitude;
    }
    if (total <= 0.0) throw InvalidSpecError("kernel: all amplitudes are zero; kernel mass must be positive");
}

std::vector<double> build_grid(double s_max, std::size_t points, SGrid kind, double ratio) {
    if (points < 2) throw InvalidSpecError("kernel: s_points must be at least 2");
    const std::size_t cells = points - 1;
    std::vector<double> grid(points);
    if (kind == SGrid::Uniform || ratio == 1.0) {
        for (std::size_t j = 0; j < points; ++j)
            grid[j] = s_max * static_cast<double>(j) / static_cast<double>(cells);
    } else {
        if (!(ratio > 1.0)) throw InvalidSpecError("kernel: geometric grid ratio must be > 1");
        // Cell widths grow by `ratio`, clustering samples near s = 0.
        const double denom = std::pow(ratio, static_cast<double>(cells)) - 1.0;
        for (std::size_t j = 0; j < points; ++j)
            grid[j] = s_max * (std::pow(ratio, static_cast<double>(j)) - 1.0) / denom;
    }
    grid.front() = 0.0;
    grid.back() = s_max;
    return grid;
}

}  // namespace

namespace {

// Stable evaluations of (1 - e^{-x})/x and (1 - e^{-x} - x e^{-x})/x^2.
double g1_of(double x) {
    if (x < 1e-2)
        return 1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0 + x * x * x * x / 120.0;
    return -std::expm1(-x) / x;
}

double g2_of(double x) {
    if (x < 1e-2)
        return 0.5 - x / 3.0 + x * x / 8.0 - x * x * x / 30.0 + x * x * x * x / 144.0;
    return (-std::expm1(-x) - x * std::exp(-x)) / (x * x);
}

// Product-integration weights for one exponential term: mu integrated in
// closed form against the piecewise-linear hat functions on s_grid. The rule
// reproduces the truncated mass and first moment of mu exactly (linear
// integrands are represented exactly), and is O(ds^2) otherwise.
std::vector<double> term_quadrature(const KernelTerm& t, const std::vector<double>& grid) {
    const std::size_t n = grid.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double h = grid[j + 1] - grid[j];
        const double x = t.rate * h;
        const double base = t.amplitude * std::exp(-t.rate * grid[j]) * h;
        const double right = base * g2_of(x);
        const double left = base * (g1_of(x) - g2_of(x));
        w[j] += left;
        w[j + 1] += right;
    }
    return w;
}

}  // namespace

std::vector<double> quadrature_weights(const KernelSpec& spec) {
    const std::size_t n = spec.points();
    if (n < 2) throw InvalidSpecError("kernel: quadrature needs at least two grid points");
    for (std::size_t j = 0; j + 1 < n; ++j)
        if (!(spec.s_grid[j] < spec.s_grid[j + 1]))
            throw InvalidSpecError("kernel: s_grid must be strictly increasing");

    std::vector<double> weights(n, 0.0);
    for (const auto& t : spec.terms) {
        const std::vector<double> row = term_quadrature(t, spec.s_grid);
        for (std::size_t j = 0; j < n; ++j) weights[j] += row[j];
    }
    return weights;
}

KernelSpec make_kernel(std::vector<KernelTerm> terms, double tail_tol, std::size_t s_points,
                       SGrid grid, double grid_ratio) {
    check_terms_or_throw(terms);
    if (!(tail_tol > 0.0)) throw InvalidSpecError("kernel: tail_tol must be positive");

    KernelSpec spec;
    spec.terms = std::move(terms);
    spec.tail_tol = tail_tol;
    spec.delta = std::numeric_limits<double>::infinity();
    for (const auto& t : spec.terms) spec.delta = std::min(spec.delta, t.rate);
    spec.gamma = spec.delta;

    // Truncation point: each term's tail (c/delta) e^{-delta s} gets an equal
    // share of the tolerance.
    const double share = tail_tol / static_cast<double>(spec.terms.size());
    double s_max = 0.0;
    for (const auto& t : spec.terms) {
        if (t.amplitude == 0.0) continue;
        const double arg = std::max(t.amplitude / (t.rate * share), std::exp(1.0));
        s_max = std::max(s_max, std::log(arg) / t.rate);
    }
    spec.s_max = s_max;
    spec.grid_kind = grid;
    spec.grid_ratio = (grid == SGrid::Geometric) ? grid_ratio : 1.0;
    spec.s_grid = build_grid(s_max, s_points, grid, grid_ratio);
    spec.quad_weights = quadrature_weights(spec);
    spec.term_weights.clear();
    for (const auto& t : spec.terms) spec.term_weights.push_back(term_quadrature(t, spec.s_grid));
    return spec;
}

KernelReport validate_kernel(const KernelSpec& spec) {
    if (spec.terms.empty())
        throw InvalidSpecError("kernel: term list is empty; mu(s) in C^1(R+) cap L^1(R+) requires at least one term");

    KernelReport report;
    report.delta = std::numeric_limits<double>::infinity();
    for (const auto& t : spec.terms) report.delta = std::min(report.delta, t.rate);

    KernelCheck structural{"mu(s) in C^1(R+) cap L^1(R+): amplitudes >= 0, rates > 0", true, -1.0};
    for (const auto& t : spec.terms)
        if (t.amplitude < 0.0 || !(t.rate > 0.0)) structural.pass = false;
    report.checks.push_back(structural);

    KernelCheck nonneg{"mu(s) >= 0 on s_grid", true, -1.0};
    KernelCheck decreasing{"mu'(s) <= 0 on s_grid", true, -1.0};
    KernelCheck uniform{"mu'(s) + delta*mu(s) <= 0 on s_grid", true, -1.0};
    const double slack = 1e-12;
    for (double s : spec.s_grid) {
        const double m = spec.mu(s);
        const double mp = spec.mu_prime(s);
        if (m < -slack && nonneg.pass) { nonneg.pass = false; nonneg.offending_s = s; }
        if (mp > slack && decreasing.pass) { decreasing.pass = false; decreasing.offending_s = s; }
        if (mp + report.delta * m > slack * std::max(1.0, m) && uniform.pass) {
            uniform.pass = false;
            uniform.offending_s = s;
        }
    }
    report.checks.push_back(nonneg);
    report.checks.push_back(decreasing);
    report.checks.push_back(uniform);

    KernelCheck tail{"tail mass int_{s_max}^inf mu <= tail_tol", true, -1.0};
    if (structural.pass) {
        const double t = kernel_tail(spec, spec.s_max);
        tail.pass = t <= spec.tail_tol * (1.0 + 1e-9);
        if (!tail.pass) tail.offending_s = spec.s_max;
    } else {
        tail.pass = false;
    }
    report.checks.push_back(tail);

    report.pass = true;
    for (const auto& c : report.checks) report.pass = report.pass && c.pass;
    return report;
}

double kernel_tail(const KernelSpec& spec, double s) {
    if (s < 0.0) throw DomainArgError("kernel_tail: s must be >= 0");
    double v = 0.0;
    for (const auto& t : spec.terms) v += t.amplitude / t.rate * std::exp(-t.rate * s);
    return v;
}

double integrate_weighted(const KernelSpec& spec, const std::vector<double>& phi) {
    if (phi.size() != spec.points())
        throw ShapeError("integrate_weighted: integrand length does not match s_grid");
    double acc = 0.0;
    for (std::size_t j = 0; j < phi.size(); ++j) acc += spec.quad_weights[j] * phi[j];
    return acc;
}

}  // namespace memdiff
