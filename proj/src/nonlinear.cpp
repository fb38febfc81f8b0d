#include "memdiff/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "memdiff/errors.hpp"

namespace memdiff {

double NonlinearitySpec::g(double u) const {
    return u * (coeffs[0] + u * (coeffs[1] + u * (coeffs[2] + u * coeffs[3])));
}

double NonlinearitySpec::g_prime(double u) const {
    return coeffs[0] + u * (2.0 * coeffs[1] + u * (3.0 * coeffs[2] + u * 4.0 * coeffs[3]));
}

double NonlinearitySpec::antiderivative(double u) const {
    return u * u *
           (coeffs[0] / 2.0 +
            u * (coeffs[1] / 3.0 + u * (coeffs[2] / 4.0 + u * coeffs[3] / 5.0)));
}

NonlinearitySpec validate_nonlinearity(const std::vector<double>& coeffs, double lambda1) {
    if (coeffs.size() > 4)
        throw InvalidSpecError(
            "nonlinearity: polynomial degree above 4 violates |g'(u)| <= C(1+u^4)");
    if (!(lambda1 > 0.0)) throw DomainArgError("nonlinearity: lambda1 must be positive");

    NonlinearitySpec spec;
    for (std::size_t i = 0; i < coeffs.size(); ++i) spec.coeffs[i] = coeffs[i];
    spec.degree = 0;
    for (int i = 3; i >= 0; --i)
        if (spec.coeffs[static_cast<std::size_t>(i)] != 0.0) { spec.degree = i + 1; break; }
    spec.beta = std::max(spec.degree, 1);

    // Asymptotic limsup g(u)/u < lambda1. An even-degree leading term blows up
    // on one side; a positive cubic blows up on both.
    const double margin_floor = 0.01 * lambda1;
    if (spec.degree == 2 || spec.degree == 4)
        throw InvalidSpecError(
            "nonlinearity: even leading term makes limsup g(u)/u = +inf >= lambda1");
    if (spec.degree == 3 && spec.coeffs[2] > 0.0)
        throw InvalidSpecError(
            "nonlinearity: positive cubic leading term makes limsup g(u)/u = +inf >= lambda1");
    if (spec.degree <= 1 && spec.coeffs[0] > lambda1 - margin_floor)
        throw InvalidSpecError(
            "nonlinearity: linear slope violates limsup g(u)/u < lambda1 (needs slope < 0.99*lambda1)");

    double abs_sum = 0.0, deriv_sum = 0.0;
    for (int i = 0; i < 4; ++i) {
        abs_sum += std::abs(spec.coeffs[static_cast<std::size_t>(i)]);
        deriv_sum += (i + 1) * std::abs(spec.coeffs[static_cast<std::size_t>(i)]);
    }
    spec.growth_c = std::max(abs_sum, deriv_sum);

    // Scan for the smallest pointwise offset c1 meeting the margin floor,
    // then recover the realized margin eps = lambda1 - sup (u g(u) - c1)/u^2.
    const double lo = -1e3, hi = 1e3;
    const std::size_t n_scan = 1000000;
    const double step = (hi - lo) / static_cast<double>(n_scan - 1);
    double c1 = 0.0;
    for (std::size_t i = 0; i < n_scan; ++i) {
        const double u = lo + step * static_cast<double>(i);
        c1 = std::max(c1, u * spec.g(u) - (lambda1 - margin_floor) * u * u);
    }
    double sup_ratio = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_scan; ++i) {
        const double u = lo + step * static_cast<double>(i);
        if (u == 0.0) continue;
        sup_ratio = std::max(sup_ratio, (u * spec.g(u) - c1) / (u * u));
    }
    const double eps = lambda1 - sup_ratio;
    if (!(eps >= margin_floor * (1.0 - 1e-9)))
        throw InvalidSpecError("nonlinearity: no admissible (nu, c1) with the required margin");
    spec.nu = std::min(1.0, eps / lambda1);
    spec.c1 = c1;
    return spec;
}

int dealias_points(int m, int degree) {
    // Both g(u) * phi_k (frequency deg*m + m) and the potential integrand
    // G(u) (a degree deg+1 polynomial in u) carry frequencies up to
    // (deg+1)*m. The interior-point sine quadrature on n points is exact for
    // frequencies below 2(n+1), so n = (deg+1)*m/2 suffices. The cubic case
    // reproduces the n >= 2m rule.
    const int q = std::max(degree, 1) + 1;
    return std::max((q * m) / 2, m);
}

TransformPlan dealias_plan(const NonlinearitySpec& spec, const ModeBasis& basis,
                           bool for_potential) {
    (void)for_potential;  // same frequency bound for both uses
    std::array<int, 3> pts = basis.collocation_per_dim;
    for (int d = 0; d < basis.domain.dims; ++d) {
        const std::size_t sd = static_cast<std::size_t>(d);
        pts[sd] = std::max(pts[sd], dealias_points(basis.modes_per_dim[sd], spec.degree));
    }
    return TransformPlan(basis, pts);
}

State apply_nonlinearity(const NonlinearitySpec& spec, const State& u, const ModeBasis& basis,
                         const TransformPlan& plan) {
    if (u.size() != basis.size()) throw ShapeError("apply_nonlinearity: state length mismatch");
    if (spec.is_zero()) return State(u.size());
    if (spec.degree == 1) {
        // diagonal in mode space
        State out(u.size());
        for (std::size_t k = 0; k < u.size(); ++k) out[k] = spec.coeffs[0] * u[k];
        return out;
    }
    std::vector<double> grid = plan.to_grid(u.coeffs);
    for (double& v : grid) v = spec.g(v);
    return State(plan.to_modes(grid));
}

State apply_nonlinearity(const NonlinearitySpec& spec, const State& u, const ModeBasis& basis) {
    if (spec.is_zero() || spec.degree == 1) return apply_nonlinearity(spec, u, basis, TransformPlan(basis, basis.collocation_per_dim));
    const TransformPlan plan = dealias_plan(spec, basis);
    return apply_nonlinearity(spec, u, basis, plan);
}

double potential_integral(const NonlinearitySpec& spec, const State& u, const ModeBasis& basis) {
    if (u.size() != basis.size()) throw ShapeError("potential_integral: state length mismatch");
    if (spec.is_zero()) return 0.0;
    const TransformPlan plan = dealias_plan(spec, basis, /*for_potential=*/true);
    std::vector<double> grid = plan.to_grid(u.coeffs);
    double acc = 0.0;
    for (double v : grid) acc += spec.antiderivative(v);
    return acc * plan.cell_volume();
}

}  // namespace memdiff
