#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace memdiff {

// One decaying-exponential component c * exp(-rate * s) of the memory kernel.
struct KernelTerm {
    double amplitude = 0.0;  // c_i >= 0
    double rate = 0.0;       // delta_i > 0
};

enum class SGrid { Uniform, Geometric };

/// Memory kernel mu(s) = sum_i c_i exp(-delta_i s) with its truncated
/// quadrature grid on [0, s_max]. The admissible family is restricted to
/// finite exponential sums: they satisfy mu' + delta*mu <= 0 with
/// delta = min_i delta_i, have closed-form tails, and admit an exact
/// auxiliary-ODE reduction used by the solver oracle.
///
/// Immutable after construction; safe to share across threads.
struct KernelSpec {
    std::vector<KernelTerm> terms;
    double delta = 0.0;     // uniform decay rate, min_i delta_i
    double gamma = 0.0;     // pairing constant of the history inequality; set to delta
    double tail_tol = 1e-8; // bound on the discarded mass int_{s_max}^inf mu
    double s_max = 0.0;
    SGrid grid_kind = SGrid::Uniform;
    double grid_ratio = 1.0;
    std::vector<double> s_grid;                     // 0 = s_0 < ... < s_J = s_max
    std::vector<double> quad_weights;               // w_j, integrates mu(s_j)*phi(s_j)
    std::vector<std::vector<double>> term_weights;  // per-term split, quad_weights = sum_i

    std::size_t points() const { return s_grid.size(); }
    double mu(double s) const;
    double mu_prime(double s) const;
    // Total kernel mass k(0) = int_0^inf mu, closed form.
    double mass() const;
    // Mass of the retained window [0, s_max], closed form.
    double truncated_mass() const;
};

struct KernelCheck {
    std::string condition;
    bool pass = true;
    double offending_s = -1.0;  // grid point violating the condition, when applicable
};

struct KernelReport {
    bool pass = false;
    double delta = 0.0;
    std::vector<KernelCheck> checks;
    std::string summary() const;
};

/// Builds a validated kernel. s_points counts grid samples including s=0.
/// s_max is chosen per term so the discarded tail mass stays below tail_tol.
/// Throws InvalidSpecError for empty/negative-amplitude/nonpositive-rate terms.
KernelSpec make_kernel(std::vector<KernelTerm> terms, double tail_tol = 1e-8,
                       std::size_t s_points = 512, SGrid grid = SGrid::Uniform,
                       double grid_ratio = 1.02);

/// Re-checks an assembled spec against the kernel admissibility conditions
/// (mu in C^1 cap L^1, mu >= 0, mu' <= 0, mu' + delta*mu <= 0, tail below
/// tolerance). Returns one entry per condition. Throws on an empty term list.
KernelReport validate_kernel(const KernelSpec& spec);

/// k(s) = int_s^inf mu(r) dr = sum_i (c_i/delta_i) exp(-delta_i s).
double kernel_tail(const KernelSpec& spec, double s);

/// Quadrature weights aligned with s_grid for int_0^{s_max} mu(s) phi(s) ds:
/// mu is integrated in closed form against the piecewise-linear interpolant
/// of phi (product integration). The weight sum reproduces the analytic
/// truncated kernel mass exactly, as does the first moment; general smooth
/// integrands see the usual O(ds^2) of a trapezoid-class rule. Throws
/// InvalidSpecError on a non-monotone grid.
std::vector<double> quadrature_weights(const KernelSpec& spec);

/// sum_j w_j phi_j, the discretization of int_0^{s_max} mu(s) phi(s) ds.
double integrate_weighted(const KernelSpec& spec, const std::vector<double>& phi);

}  // namespace memdiff
