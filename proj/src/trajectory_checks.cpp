#include <algorithm>
#include <cmath>
#include <limits>

#include "memdiff/solver.hpp"

namespace memdiff {

namespace {

double diff_state_norm_sq(const State& a, const State& b, const ModeBasis& basis, int alpha) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        double w = basis.eigenvalues[k];
        if (alpha == 2) w *= w;
        acc += w * d * d;
    }
    return acc;
}

double diff_history_norm_sq(const History& a, const History& b, const KernelSpec& kernel,
                            const ModeBasis& basis) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.n_modes; ++k) {
        const double* ra = a.row(k);
        const double* rb = b.row(k);
        double sq = 0.0;
        for (std::size_t j = 0; j < a.n_points; ++j) {
            const double d = ra[j] - rb[j];
            sq += kernel.quad_weights[j] * d * d;
        }
        const double lam = basis.eigenvalues[k];
        acc += lam * lam * sq;
    }
    return acc;
}

}  // namespace

DependenceReport dependence_check(const Trajectory& a, const Trajectory& b, double beta,
                                  const KernelSpec& kernel, const ModeBasis& basis,
                                  double supplied_ch) {
    if (a.steps != b.steps || a.dt != b.dt)
        throw AlignmentError("dependence: trajectories must share sampling times");
    if (a.states.size() != a.records.size() || b.states.size() != b.records.size())
        throw AlignmentError("dependence: trajectories must record states at every sample");
    if (a.histories.size() != a.records.size() || b.histories.size() != b.records.size())
        throw AlignmentError("dependence: trajectories must record histories at every sample");

    const std::size_t n = a.records.size();
    std::vector<double> sep(n), weight(n);
    for (std::size_t i = 0; i < n; ++i) {
        sep[i] = diff_state_norm_sq(a.states[i], b.states[i], basis, 1) +
                 diff_state_norm_sq(a.states[i], b.states[i], basis, 2) +
                 diff_history_norm_sq(a.histories[i], b.histories[i], kernel, basis);
        weight[i] = 1.0 + std::pow(a.records[i].u_h2_sq, beta + 1.0) +
                    std::pow(b.records[i].u_h2_sq, beta + 1.0);
    }

    DependenceReport rep;
    rep.s0 = sep.front();
    rep.s_final = sep.back();
    if (rep.s0 <= 0.0) {
        rep.vacuous = std::all_of(sep.begin(), sep.end(), [](double s) { return s <= 0.0; });
        return rep;
    }

    // W(t) = int_0^t (1 + ||u1||_2^{2beta+2} + ||u2||_2^{2beta+2})
    std::vector<double> W(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        const double dtw = a.times[i] - a.times[i - 1];
        W[i] = W[i - 1] + 0.5 * dtw * (weight[i] + weight[i - 1]);
    }

    double fitted = 0.0;
    double gap = -std::numeric_limits<double>::infinity();
    const double ch = supplied_ch >= 0.0 ? supplied_ch : 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        if (sep[i] > 0.0 && W[i] > 0.0)
            fitted = std::max(fitted, std::log(sep[i] / rep.s0) / W[i]);
        const double log_s = sep[i] > 0.0 ? std::log(sep[i]) : -std::numeric_limits<double>::infinity();
        gap = std::max(gap, log_s - std::log(rep.s0) - ch * W[i]);
    }
    rep.fitted_ch = fitted;
    rep.max_log_gap = gap;
    return rep;
}

DafermosReport dafermos_inequality_report(const Trajectory& traj, const KernelSpec& kernel) {
    DafermosReport rep;
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (const auto& rec : traj.records) {
        const double margin = rec.dafermos_pairing_mu1 - 0.5 * kernel.gamma * rec.eta_mu1_sq;
        rep.min_margin = std::min(rep.min_margin, margin);
        rep.max_norm = std::max(rep.max_norm, rec.eta_mu1_sq);
    }
    if (traj.records.empty()) rep.min_margin = 0.0;
    rep.deficit = std::max(0.0, -rep.min_margin);
    return rep;
}

}  // namespace memdiff
