#include "memdiff/field.hpp"

#include <algorithm>
#include <cmath>

#include "memdiff/errors.hpp"

namespace memdiff {

namespace {

void require_alignment(const History& h, const KernelSpec& kernel) {
    if (h.n_points != kernel.points())
        throw ShapeError("history: s-grid length does not match kernel grid");
    if (h.values.size() != h.n_modes * h.n_points)
        throw ShapeError("history: storage size inconsistent with shape");
}

void require_alpha12(int alpha) {
    if (alpha != 1 && alpha != 2) throw DomainArgError("history norm: alpha must be 1 or 2");
}

double lambda_power(double lambda, int alpha) {
    return alpha == 1 ? lambda : lambda * lambda;
}

}  // namespace

History history_from_constant_past(const State& u0, const KernelSpec& kernel) {
    History h(u0.size(), kernel.points());
    for (std::size_t k = 0; k < h.n_modes; ++k) {
        double* row = h.row(k);
        for (std::size_t j = 0; j < h.n_points; ++j) row[j] = kernel.s_grid[j] * u0[k];
    }
    return h;
}

History history_from_past_trajectory(const std::vector<std::pair<double, State>>& samples,
                                     const KernelSpec& kernel) {
    if (samples.size() < 2)
        throw DomainArgError("past trajectory: need at least two samples covering [-s_max, 0]");
    const double cover_tol = 1e-9;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i)
        if (!(samples[i].first < samples[i + 1].first))
            throw DomainArgError("past trajectory: samples must be strictly time-sorted");
    if (samples.front().first > -kernel.s_max + cover_tol || samples.back().first < -cover_tol)
        throw DomainArgError("past trajectory: samples must cover [-s_max, 0]");

    const std::size_t n_modes = samples.front().second.size();
    for (const auto& s : samples)
        if (s.second.size() != n_modes)
            throw ShapeError("past trajectory: inconsistent state lengths");

    // eta(s_j) = int_0^{s_j} u(-r) dr; integrate the piecewise-linear
    // interpolant exactly, walking the merged partition of sample breakpoints
    // and grid targets. In lag coordinates r = -t the samples run from the
    // most recent (r = 0) backwards.
    History h(n_modes, kernel.points());
    const std::size_t n_samples = samples.size();
    std::vector<double> lag(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) lag[i] = -samples[n_samples - 1 - i].first;

    auto value_at = [&](std::size_t seg, double r, std::size_t k) {
        // segment between lag[seg] and lag[seg+1]
        const State& a = samples[n_samples - 1 - seg].second;
        const State& b = samples[n_samples - 2 - seg].second;
        const double t0 = lag[seg], t1 = lag[seg + 1];
        const double w = (r - t0) / (t1 - t0);
        return (1.0 - w) * a[k] + w * b[k];
    };

    std::vector<double> acc(n_modes, 0.0);
    double r_prev = 0.0;
    std::size_t seg = 0;
    for (std::size_t j = 0; j < kernel.points(); ++j) {
        const double r_target = kernel.s_grid[j];
        while (r_prev < r_target) {
            while (seg + 2 < n_samples && lag[seg + 1] <= r_prev) ++seg;
            const double r_next = std::min(r_target, std::min(lag[seg + 1], kernel.s_max));
            const double dr = r_next - r_prev;
            if (dr <= 0.0) break;
            for (std::size_t k = 0; k < n_modes; ++k) {
                const double va = value_at(seg, r_prev, k);
                const double vb = value_at(seg, r_next, k);
                acc[k] += 0.5 * dr * (va + vb);
            }
            r_prev = r_next;
        }
        for (std::size_t k = 0; k < n_modes; ++k) h.row(k)[j] = acc[k];
    }
    for (std::size_t k = 0; k < n_modes; ++k) h.row(k)[0] = 0.0;
    return h;
}

std::vector<double> memory_integral(const History& h, const KernelSpec& kernel) {
    require_alignment(h, kernel);
    std::vector<double> m(h.n_modes, 0.0);
    for (std::size_t k = 0; k < h.n_modes; ++k) {
        const double* row = h.row(k);
        double acc = 0.0;
        for (std::size_t j = 0; j < h.n_points; ++j) acc += kernel.quad_weights[j] * row[j];
        m[k] = acc;
    }
    return m;
}

void per_term_moments(const History& h, const KernelSpec& kernel, std::vector<double>& out) {
    require_alignment(h, kernel);
    const std::size_t n_terms = kernel.terms.size();
    out.assign(n_terms * h.n_modes, 0.0);
    for (std::size_t k = 0; k < h.n_modes; ++k) {
        const double* row = h.row(k);
        for (std::size_t i = 0; i < n_terms; ++i) {
            const double* w = kernel.term_weights[i].data();
            double acc = 0.0;
            for (std::size_t j = 0; j < h.n_points; ++j) acc += w[j] * row[j];
            out[i * h.n_modes + k] = acc;
        }
    }
}

double history_norm_sq(const History& h, const KernelSpec& kernel, const ModeBasis& basis,
                       int alpha) {
    require_alpha12(alpha);
    require_alignment(h, kernel);
    if (h.n_modes != basis.size()) throw ShapeError("history norm: mode count mismatch");
    double acc = 0.0;
    for (std::size_t k = 0; k < h.n_modes; ++k) {
        const double* row = h.row(k);
        double rk = 0.0;
        for (std::size_t j = 0; j < h.n_points; ++j) rk += kernel.quad_weights[j] * row[j] * row[j];
        acc += lambda_power(basis.eigenvalues[k], alpha) * rk;
    }
    return acc;
}

TransportPlan make_transport_plan(const KernelSpec& kernel, double dt) {
    if (!(dt > 0.0)) throw DomainArgError("transport: dt must be positive");
    const auto& s = kernel.s_grid;
    const std::size_t n = s.size();
    if (n < 2) throw ShapeError("transport: s_grid needs at least two points");
    TransportPlan plan;
    plan.dt = dt;
    plan.stencil.assign(n, -1);
    plan.weights.assign(n, {0.0, 0.0, 0.0, 0.0});
    const std::size_t cells = n - 1;
    for (std::size_t j = 0; j < n; ++j) {
        if (s[j] < dt) continue;  // young fill
        const double x = s[j] - dt;
        // locate the cell holding x
        std::size_t c = static_cast<std::size_t>(
            std::upper_bound(s.begin(), s.end(), x) - s.begin());
        c = (c == 0) ? 0 : c - 1;
        if (c >= cells) c = cells - 1;
        if (cells >= 3) {
            // 4-node Lagrange stencil; one-sided at the boundaries. Exact on
            // cubics, in particular on the linear steady profile s * u.
            std::size_t a = (c == 0) ? 0 : c - 1;
            if (a + 3 > cells) a = cells - 3;
            plan.stencil[j] = static_cast<int>(a);
            for (int t = 0; t < 4; ++t) {
                double w = 1.0;
                const double xt = s[a + static_cast<std::size_t>(t)];
                for (int u = 0; u < 4; ++u) {
                    if (u == t) continue;
                    const double xu = s[a + static_cast<std::size_t>(u)];
                    w *= (x - xu) / (xt - xu);
                }
                plan.weights[j][static_cast<std::size_t>(t)] = w;
            }
        } else {
            plan.stencil[j] = static_cast<int>(c);
            const double w1 = (x - s[c]) / (s[c + 1] - s[c]);
            plan.weights[j] = {1.0 - w1, w1, 0.0, 0.0};
        }
    }
    return plan;
}

void transport_apply(History& h, const State& u_new, const KernelSpec& kernel,
                     const TransportPlan& plan, std::vector<double>& scratch) {
    require_alignment(h, kernel);
    if (u_new.size() != h.n_modes) throw ShapeError("transport: state length mismatch");
    const std::size_t n = h.n_points;
    scratch.resize(n);
    const int span = (n - 1 >= 3) ? 4 : 2;
    for (std::size_t k = 0; k < h.n_modes; ++k) {
        double* row = h.row(k);
        const double uk = u_new[k];
        for (std::size_t j = 0; j < n; ++j) {
            if (plan.stencil[j] < 0) {
                scratch[j] = kernel.s_grid[j] * uk;
            } else {
                const std::size_t a = static_cast<std::size_t>(plan.stencil[j]);
                double v = 0.0;
                for (int t = 0; t < span; ++t)
                    v += plan.weights[j][static_cast<std::size_t>(t)] * row[a + static_cast<std::size_t>(t)];
                scratch[j] = v + plan.dt * uk;
            }
        }
        scratch[0] = 0.0;
        std::copy(scratch.begin(), scratch.end(), row);
    }
}

void transport_step(History& h, const State& u_new, double dt, const KernelSpec& kernel) {
    const TransportPlan plan = make_transport_plan(kernel, dt);
    std::vector<double> scratch;
    transport_apply(h, u_new, kernel, plan, scratch);
}

double dafermos_pairing(const History& h, const KernelSpec& kernel, const ModeBasis& basis,
                        int alpha) {
    require_alpha12(alpha);
    require_alignment(h, kernel);
    if (h.n_modes != basis.size()) throw ShapeError("pairing: mode count mismatch");
    if (h.n_points < 2) throw DomainArgError("pairing: need at least two s-grid points");
    double acc = 0.0;
    for (std::size_t k = 0; k < h.n_modes; ++k) {
        const double* row = h.row(k);
        double rk = 0.0;
        for (std::size_t j = 0; j < h.n_points; ++j) {
            double ds, diff;
            if (j == 0) {
                ds = kernel.s_grid[1] - kernel.s_grid[0];
                diff = row[1] - row[0];
            } else {
                ds = kernel.s_grid[j] - kernel.s_grid[j - 1];
                diff = row[j] - row[j - 1];
            }
            rk += kernel.quad_weights[j] * row[j] * (diff / ds);
        }
        acc += lambda_power(basis.eigenvalues[k], alpha) * rk;
    }
    return acc;
}

}  // namespace memdiff
