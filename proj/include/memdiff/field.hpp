#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "memdiff/basis.hpp"
#include "memdiff/kernel.hpp"

namespace memdiff {

// Mode coefficients of u(t) in the orthonormal eigenbasis.
struct State {
    std::vector<double> coeffs;

    State() = default;
    explicit State(std::size_t n) : coeffs(n, 0.0) {}
    explicit State(std::vector<double> c) : coeffs(std::move(c)) {}
    std::size_t size() const { return coeffs.size(); }
    double& operator[](std::size_t i) { return coeffs[i]; }
    double operator[](std::size_t i) const { return coeffs[i]; }
};

/// Dafermos history eta^t(s) = int_0^s u(t-r) dr sampled on the kernel's
/// s_grid, one row per mode. The s = 0 column is identically zero; it is a
/// hard boundary condition of the transport update.
struct History {
    std::size_t n_modes = 0;
    std::size_t n_points = 0;
    std::vector<double> values;  // [mode * n_points + j]

    History() = default;
    History(std::size_t modes, std::size_t points)
        : n_modes(modes), n_points(points), values(modes * points, 0.0) {}

    double* row(std::size_t k) { return values.data() + k * n_points; }
    const double* row(std::size_t k) const { return values.data() + k * n_points; }
};

/// eta^0(s) = s * u0, the history of a trajectory held at u0 for all t <= 0.
History history_from_constant_past(const State& u0, const KernelSpec& kernel);

/// History integrated from time-stamped states of the past trajectory
/// (times <= 0, sorted, covering [-s_max, 0]). The piecewise-linear
/// interpolant of the samples is integrated exactly onto the s_grid.
History history_from_past_trajectory(const std::vector<std::pair<double, State>>& samples,
                                     const KernelSpec& kernel);

/// M_k = int_0^{s_max} mu(s) eta_k(s) ds by the kernel quadrature. The
/// solver multiplies by lambda_k to form the memory term.
std::vector<double> memory_integral(const History& h, const KernelSpec& kernel);

/// Per-term moments B[i][k] = int mu_i(s) eta_k(s) ds, flattened
/// [term * n_modes + k]; memory_integral equals the sum over terms. These are
/// what the solver shifts in closed form for stage-consistent refreshes.
void per_term_moments(const History& h, const KernelSpec& kernel, std::vector<double>& out);

/// ||eta||^2_{mu,alpha} = int mu(s) ||eta(s)||_alpha^2 ds, alpha in {1,2}.
double history_norm_sq(const History& h, const KernelSpec& kernel, const ModeBasis& basis,
                       int alpha);

/// Precomputed interpolation stencil for a fixed (s_grid, dt) transport shift.
struct TransportPlan {
    double dt = 0.0;
    std::vector<int> stencil;               // start node; -1 marks the young fill s_j < dt
    std::vector<std::array<double, 4>> weights;
};

TransportPlan make_transport_plan(const KernelSpec& kernel, double dt);

/// One semi-Lagrangian step of eta_t = -eta_s + u along exact characteristics:
/// eta_new(s) = eta_old(s - dt) + dt * u_new for s >= dt (interpolated
/// off-grid), eta_new(s) = s * u_new for s < dt; eta(0) = 0 is reasserted.
/// Values transported past s_max are discarded.
void transport_step(History& h, const State& u_new, double dt, const KernelSpec& kernel);

/// Same update with a prebuilt plan and caller-provided scratch row.
void transport_apply(History& h, const State& u_new, const KernelSpec& kernel,
                     const TransportPlan& plan, std::vector<double>& scratch);

/// (eta, eta_s)_{mu,alpha} with eta_s from one-sided differences on s_grid.
/// The admissibility of the kernel makes this >= (gamma/2) ||eta||^2_{mu,alpha}
/// up to discretization.
double dafermos_pairing(const History& h, const KernelSpec& kernel, const ModeBasis& basis,
                        int alpha);

}  // namespace memdiff
