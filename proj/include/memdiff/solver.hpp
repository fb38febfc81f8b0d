#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "memdiff/basis.hpp"
#include "memdiff/diagnostics.hpp"
#include "memdiff/errors.hpp"
#include "memdiff/field.hpp"
#include "memdiff/kernel.hpp"
#include "memdiff/nonlinear.hpp"

namespace memdiff {

/// Everything a run needs. The Laplacian-of-the-rate coefficient is fixed to
/// one, so each linear mode rate is lambda_k / (1 + lambda_k) in (0, 1): the
/// system has no spectral stiffness and explicit stepping is uniformly stable
/// for moderate dt regardless of the mode count.
struct SimConfig {
    ModeBasis basis;
    KernelSpec kernel;
    NonlinearitySpec nonlinearity;
    std::vector<double> forcing;  // time-independent f_k, aligned with basis
    double dt = 1e-3;
    double t_end = 1.0;
    long record_every = 10;
    std::uint64_t seed = 1;
    std::vector<std::size_t> tail_cutoffs;  // tail energies tracked per record
    bool record_states = true;
    bool record_history = false;  // keep a History snapshot per record
};

struct Trajectory {
    double dt = 0.0;
    long start_step = 0;
    std::vector<long> steps;      // record step indices; t = step * dt
    std::vector<double> times;
    std::vector<State> states;
    std::vector<EnergyRecord> records;
    std::vector<History> histories;  // aligned with records when requested
    State final_state;
    History final_history;
};

/// Blow-up: a coefficient became non-finite. Carries the failure time and the
/// trajectory recorded so far.
struct DivergenceError : Error {
    DivergenceError(double when, const std::string& msg) : Error(msg), time(when) {}
    double time;
    std::shared_ptr<Trajectory> partial;
};

/// Owns the per-run workspace: dealiasing transform plan, transport stencil,
/// per-term history moments and stage buffers. One instance per sequential
/// run; not shared across threads.
class Stepper {
  public:
    explicit Stepper(const SimConfig& cfg);

    // Advance (u, h) by one dt using classical RK4 on the mode ODEs
    //   (1 + lambda_k) du_k/dt = -lambda_k u_k - lambda_k M_k + g_k(u) + f_k
    // with the memory integral M_k refreshed per stage: the start-of-step
    // per-term moments are shifted in closed form by the stage offset and the
    // young-history increment is added with trapezoid accuracy. The committed
    // transport carries the RK4 quadrature of u over the step, keeping the
    // history increments at the integrator's order.
    void advance(State& u, History& h, double t_now);

  private:
    void eval_rhs(const State& u, const std::vector<double>& memory, State& out);
    void stage_memory(double tau, const State& u_base, const State& u_stage,
                      std::vector<double>& out) const;

    const SimConfig* cfg_;
    TransformPlan plan_;
    TransportPlan transport_;
    std::vector<double> moments_;  // [term * n_modes + k]
    std::vector<double> mem_;
    State k1_, k2_, k3_, k4_, u2_, u3_, u4_, u_eff_, g_;
    std::vector<double> scratch_;
};

/// One time step of the approximation system; convenience wrapper that builds
/// the workspace per call.
void step(State& u, History& h, const SimConfig& cfg);

/// Iterates `step` to t_end, recording diagnostics every record_every steps
/// (plus the initial and final states). t_end below dt yields the single
/// initial record. Restarting from a recorded state reproduces the remainder
/// bit-exactly; `start_step` offsets recorded times for such continuations.
Trajectory evolve(const SimConfig& cfg, const State& u0, const History& h0,
                  long start_step = 0);

/// Closed-form solution of the single-mode problem with a one-term kernel
/// mu(s) = c e^{-delta s} and g = 0. Integrating the history transport by
/// parts (eta(0) = 0) turns the memory integral into the auxiliary ODE
/// M' = -delta M + (c/delta) u, giving the 2x2 linear system
///   (1 + lambda) u' = -lambda u - lambda M + f,   M' = -delta M + (c/delta) u
/// solved here by explicit matrix exponential.
struct LinearOraclePoint {
    double u = 0.0;
    double m = 0.0;
};
LinearOraclePoint linear_oracle_solve(double lambda, double c, double delta, double f, double u0,
                                      double m0, double t);
LinearOraclePoint linear_oracle_solve(double lambda, const KernelSpec& kernel, double f, double u0,
                                      double m0, double t);

/// Steady state u* = f / (lambda (1 + c/delta^2)) of the same system.
double linear_oracle_steady(double lambda, double c, double delta, double f);

inline AbsorbingEstimate absorbing_estimate(const SimConfig& cfg, double M1, double m2 = 1.0) {
    return absorbing_estimate(cfg.basis, cfg.nonlinearity, cfg.kernel.gamma, cfg.forcing, M1, m2);
}

/// Continuous-dependence check between two runs sharing config and sampling:
/// S(t) = ||du||_1^2 + ||du||_2^2 + ||d eta||^2_{mu,2} against
/// S(0) exp(int_0^t h), h = C_h (1 + ||u1||_2^{2 beta + 2} + ||u2||_2^{2 beta + 2}).
struct DependenceReport {
    double max_log_gap = 0.0;   // max_t [log S(t) - log S(0) - int_0^t h]
    double fitted_ch = 0.0;     // minimal C_h making the bound hold
    double s0 = 0.0;
    double s_final = 0.0;
    bool vacuous = false;       // identical trajectories
};
DependenceReport dependence_check(const Trajectory& a, const Trajectory& b, double beta,
                                  const KernelSpec& kernel, const ModeBasis& basis,
                                  double supplied_ch = -1.0);

/// Aggregated history inequality margin over a run's records:
/// min_t [ (eta, eta_s)_{mu,1} - (gamma/2) ||eta||^2_{mu,1} ].
struct DafermosReport {
    double min_margin = 0.0;
    double max_norm = 0.0;
    double deficit = 0.0;  // max(0, -min_margin)
};
DafermosReport dafermos_inequality_report(const Trajectory& traj, const KernelSpec& kernel);

}  // namespace memdiff
