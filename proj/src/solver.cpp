#include "memdiff/solver.hpp"

#include <cmath>
#include <sstream>

namespace memdiff {

namespace {

bool all_finite(const State& u) {
    for (double v : u.coeffs)
        if (!std::isfinite(v)) return false;
    return true;
}

void validate_run_inputs(const SimConfig& cfg, const State& u0, const History& h0) {
    if (cfg.forcing.size() != cfg.basis.size())
        throw ShapeError("run: forcing length must equal basis size");
    if (u0.size() != cfg.basis.size()) throw ShapeError("run: initial state length mismatch");
    if (h0.n_modes != cfg.basis.size() || h0.n_points != cfg.kernel.points())
        throw ShapeError("run: initial history shape mismatch");
    if (!(cfg.dt > 0.0)) throw DomainArgError("run: dt must be positive");
    if (!(cfg.t_end >= 0.0)) throw DomainArgError("run: t_end must be nonnegative");
    if (cfg.record_every < 1) throw DomainArgError("run: record_every must be >= 1");
}

}  // namespace

Stepper::Stepper(const SimConfig& cfg)
    : cfg_(&cfg),
      plan_(dealias_plan(cfg.nonlinearity, cfg.basis)),
      transport_(make_transport_plan(cfg.kernel, cfg.dt)) {
    const std::size_t n = cfg.basis.size();
    mem_.assign(n, 0.0);
    k1_ = State(n); k2_ = State(n); k3_ = State(n); k4_ = State(n);
    u2_ = State(n); u3_ = State(n); u4_ = State(n); u_eff_ = State(n);
    g_ = State(n);
}

void Stepper::eval_rhs(const State& u, const std::vector<double>& memory, State& out) {
    const auto& basis = cfg_->basis;
    const auto& nl = cfg_->nonlinearity;
    const std::size_t n = basis.size();
    if (nl.is_zero()) {
        for (std::size_t k = 0; k < n; ++k) g_[k] = 0.0;
    } else if (nl.degree == 1) {
        for (std::size_t k = 0; k < n; ++k) g_[k] = nl.coeffs[0] * u[k];
    } else {
        g_ = apply_nonlinearity(nl, u, basis, plan_);
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double lam = basis.eigenvalues[k];
        out[k] = (-lam * (u[k] + memory[k]) + g_[k] + cfg_->forcing[k]) / (1.0 + lam);
    }
}

void Stepper::stage_memory(double tau, const State& u_base, const State& u_stage,
                           std::vector<double>& out) const {
    const std::size_t n = cfg_->basis.size();
    const auto& terms = cfg_->kernel.terms;
    if (tau == 0.0) {
        for (std::size_t k = 0; k < n; ++k) {
            double acc = 0.0;
            for (std::size_t i = 0; i < terms.size(); ++i) acc += moments_[i * n + k];
            out[k] = acc;
        }
        return;
    }
    // eta at the stage offset is the current history shifted by tau plus the
    // young segment grown from the trapezoid mean of u over [t, t + tau]. The
    // shift of each exponential moment is exact: int mu_i(s) eta(s - tau) ds
    // = e^{-delta_i tau} * moment_i.
    double young = 0.0;  // int_0^inf mu * (growth of eta per unit u)
    std::vector<double> shift(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const double c = terms[i].amplitude, d = terms[i].rate;
        const double e = std::exp(-d * tau);
        shift[i] = e;
        young += tau * (c / d) * e + c * (1.0 - (1.0 + d * tau) * e) / (d * d);
    }
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < terms.size(); ++i) acc += shift[i] * moments_[i * n + k];
        out[k] = acc + young * 0.5 * (u_base[k] + u_stage[k]);
    }
}

void Stepper::advance(State& u, History& h, double t_now) {
    const double dt = cfg_->dt;
    const std::size_t n = cfg_->basis.size();
    per_term_moments(h, cfg_->kernel, moments_);

    stage_memory(0.0, u, u, mem_);
    eval_rhs(u, mem_, k1_);
    for (std::size_t k = 0; k < n; ++k) u2_[k] = u[k] + 0.5 * dt * k1_[k];

    stage_memory(0.5 * dt, u, u2_, mem_);
    eval_rhs(u2_, mem_, k2_);
    for (std::size_t k = 0; k < n; ++k) u3_[k] = u[k] + 0.5 * dt * k2_[k];

    stage_memory(0.5 * dt, u, u3_, mem_);
    eval_rhs(u3_, mem_, k3_);
    for (std::size_t k = 0; k < n; ++k) u4_[k] = u[k] + dt * k3_[k];

    stage_memory(dt, u, u4_, mem_);
    eval_rhs(u4_, mem_, k4_);

    for (std::size_t k = 0; k < n; ++k) {
        u_eff_[k] = (u[k] + 2.0 * u2_[k] + 2.0 * u3_[k] + u4_[k]) / 6.0;
        u[k] += dt / 6.0 * (k1_[k] + 2.0 * k2_[k] + 2.0 * k3_[k] + k4_[k]);
    }
    if (!all_finite(u)) {
        std::ostringstream msg;
        msg << "solution diverged (non-finite coefficients) at t = " << (t_now + dt)
            << "; an inadmissible nonlinearity can blow up";
        throw DivergenceError(t_now + dt, msg.str());
    }
    transport_apply(h, u_eff_, cfg_->kernel, transport_, scratch_);
    // Nodes younger than dt hold int_0^s u(t+dt-r) dr. The plain s * u fill
    // is first order in dt; expanding around the step end with the RK4 slope
    // keeps the committed history at the integrator's order when dt spans
    // grid cells.
    for (std::size_t j = 1; j < h.n_points; ++j) {
        if (transport_.stencil[j] >= 0) continue;
        const double s = cfg_->kernel.s_grid[j];
        for (std::size_t k = 0; k < n; ++k)
            h.row(k)[j] = s * u[k] - 0.5 * s * s * k4_[k];
    }
}

void step(State& u, History& h, const SimConfig& cfg) {
    validate_run_inputs(cfg, u, h);
    Stepper stepper(cfg);
    stepper.advance(u, h, 0.0);
}

Trajectory evolve(const SimConfig& cfg, const State& u0, const History& h0, long start_step) {
    validate_run_inputs(cfg, u0, h0);
    Trajectory traj;
    traj.dt = cfg.dt;
    traj.start_step = start_step;

    State u = u0;
    History h = h0;
    Stepper stepper(cfg);

    const long n_steps = static_cast<long>(std::floor(cfg.t_end / cfg.dt + 1e-9));
    auto record = [&](long step_index) {
        const double t = static_cast<double>(start_step + step_index) * cfg.dt;
        traj.steps.push_back(start_step + step_index);
        traj.times.push_back(t);
        traj.records.push_back(
            energy(u, h, cfg.kernel, cfg.basis, cfg.nonlinearity, t, cfg.tail_cutoffs));
        if (cfg.record_states) traj.states.push_back(u);
        if (cfg.record_history) traj.histories.push_back(h);
    };

    record(0);
    for (long i = 1; i <= n_steps; ++i) {
        const double t_now = static_cast<double>(start_step + i - 1) * cfg.dt;
        try {
            stepper.advance(u, h, t_now);
        } catch (DivergenceError& err) {
            err.partial = std::make_shared<Trajectory>(std::move(traj));
            throw;
        }
        if (i % cfg.record_every == 0 || i == n_steps) record(i);
    }
    traj.final_state = std::move(u);
    traj.final_history = std::move(h);
    return traj;
}

LinearOraclePoint linear_oracle_solve(double lambda, double c, double delta, double f, double u0,
                                      double m0, double t) {
    if (!(lambda > 0.0) || !(delta > 0.0) || c < 0.0)
        throw DomainArgError("linear oracle: need lambda > 0, delta > 0, c >= 0");
    // x' = A x + b with x = (u, M)
    const double a11 = -lambda / (1.0 + lambda);
    const double a12 = -lambda / (1.0 + lambda);
    const double a21 = c / delta;
    const double a22 = -delta;
    const double b1 = f / (1.0 + lambda);

    const double det = a11 * a22 - a12 * a21;  // = lambda (delta^2 + c) / ((1+lambda) delta) > 0
    const double us = -(a22 * b1) / det;
    const double ms = (a21 * b1) / det;

    const double mu = 0.5 * (a11 + a22);
    const double d11 = a11 - mu, d22 = a22 - mu;  // traceless part B
    const double disc = mu * mu - det;

    double ch, sh_over_q;  // cosh(qt), sinh(qt)/q with q^2 = disc
    if (disc > 1e-14) {
        const double q = std::sqrt(disc);
        ch = std::cosh(q * t);
        sh_over_q = std::sinh(q * t) / q;
    } else if (disc < -1e-14) {
        const double w = std::sqrt(-disc);
        ch = std::cos(w * t);
        sh_over_q = (w == 0.0) ? t : std::sin(w * t) / w;
    } else {
        ch = 1.0;
        sh_over_q = t;
    }
    const double e = std::exp(mu * t);
    const double x1 = u0 - us, x2 = m0 - ms;
    LinearOraclePoint p;
    p.u = us + e * ((ch + sh_over_q * d11) * x1 + sh_over_q * a12 * x2);
    p.m = ms + e * (sh_over_q * a21 * x1 + (ch + sh_over_q * d22) * x2);
    return p;
}

LinearOraclePoint linear_oracle_solve(double lambda, const KernelSpec& kernel, double f, double u0,
                                      double m0, double t) {
    if (kernel.terms.size() != 1)
        throw UnsupportedError(
            "linear oracle: multi-term kernels need per-term superposition of auxiliary "
            "variables; pass a single-term kernel");
    return linear_oracle_solve(lambda, kernel.terms[0].amplitude, kernel.terms[0].rate, f, u0, m0,
                               t);
}

double linear_oracle_steady(double lambda, double c, double delta, double f) {
    return f / (lambda * (1.0 + c / (delta * delta)));
}

}  // namespace memdiff
