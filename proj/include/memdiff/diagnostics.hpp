#pragma once

#include <cstddef>
#include <vector>

#include "memdiff/basis.hpp"
#include "memdiff/field.hpp"
#include "memdiff/kernel.hpp"
#include "memdiff/nonlinear.hpp"

namespace memdiff {

/// Time-stamped snapshot of every tracked norm and energy.
/// E1 and E2 are twice the V_1 / V_2 pair functionals of the state (u, eta),
/// i.e. E_alpha = ||u||_{alpha-1}^2 + ||u||_alpha^2 + ||eta||^2_{mu,alpha}.
struct EnergyRecord {
    double t = 0.0;
    double u_l2_sq = 0.0;
    double u_h1_sq = 0.0;
    double u_h2_sq = 0.0;
    double eta_mu1_sq = 0.0;
    double eta_mu2_sq = 0.0;
    double e1 = 0.0;
    double e2 = 0.0;
    double lyapunov = 0.0;            // ||u||_1^2 - 2 int G(u)
    std::vector<double> tails;        // high-mode energy per configured cutoff
    double dafermos_pairing_mu1 = 0.0;  // (eta, eta_s)_{mu,1}; not serialized
};

EnergyRecord energy(const State& u, const History& h, const KernelSpec& kernel,
                    const ModeBasis& basis, const NonlinearitySpec& nl, double t,
                    const std::vector<std::size_t>& tail_cutoffs = {});

/// Constants of the absorbing-ball estimates. m2 stands in for the
/// nonconstructive constant of the V_2 bound and is a calibration input,
/// typically the value fitted from a run.
struct AbsorbingEstimate {
    double alpha1 = 0.0;   // min{lambda1 nu / (1 + lambda1), gamma}
    double beta2 = 0.0;    // min{lambda1 / (1 + lambda1), gamma}
    double rho1_sq = 0.0;  // (2/alpha1)(2 c1 + |f|_2^2 / lambda1)
    double rho2_sq = 0.0;  // 2 [ (1/sigma) m1 C(beta2) + (m2 C(beta2 sigma))^{1/sigma} ]
    double sigma = 0.0;    // 1 - beta/5
    double m1 = 0.0;       // |f|_2^2
    double m2 = 0.0;
    double t0 = 0.0;       // predicted entry time for data with E1(0) <= M1
    bool degenerate = false;  // c1 = 0 and f = 0: rho1 = 0, entry time undefined
};

AbsorbingEstimate absorbing_estimate(const ModeBasis& basis, const NonlinearitySpec& nl,
                                     double gamma, const std::vector<double>& forcing,
                                     double M1, double m2 = 1.0);

/// C(nu) = e^nu / (1 - e^{-nu}) of the uniform Gronwall lemma.
double gronwall_c(double nu);

/// Upper bound (1/sigma) phi_tau e^{-eps elapsed} + (1/sigma) m1 C(eps)
///             + (m2 C(eps sigma))^{1/sigma}
/// for Phi' + eps Phi <= r1 + r2 Phi^{1-sigma} with unit-window sups m1, m2.
/// sigma = 1 is the classical degenerate case and requires m2 = 0.
double gronwall_bound(double phi_tau, double eps, double sigma, double m1, double m2,
                      double elapsed);

/// ||w||_1^2 + ||w||_2^2 + ||xi||^2_{mu,2} of the high parts (w, xi) of
/// (u, eta) above the rank-m cutoff.
double tail_energy(const State& u, const History& h, std::size_t cutoff, const KernelSpec& kernel,
                   const ModeBasis& basis);

}  // namespace memdiff
