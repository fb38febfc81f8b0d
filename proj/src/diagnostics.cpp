#include "memdiff/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "memdiff/errors.hpp"

namespace memdiff {

EnergyRecord energy(const State& u, const History& h, const KernelSpec& kernel,
                    const ModeBasis& basis, const NonlinearitySpec& nl, double t,
                    const std::vector<std::size_t>& tail_cutoffs) {
    if (u.size() != basis.size()) throw ShapeError("energy: state length mismatch");
    if (h.n_modes != basis.size() || h.n_points != kernel.points())
        throw ShapeError("energy: history shape mismatch");

    EnergyRecord rec;
    rec.t = t;

    const std::size_t n = basis.size();
    const std::size_t np = h.n_points;
    // Per-mode accumulations; one pass over the history serves the norms, the
    // pairing and every tail cutoff.
    std::vector<double> hist_sq(n, 0.0), hist_pair(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double* row = h.row(k);
        double sq = 0.0, pair = 0.0;
        for (std::size_t j = 0; j < np; ++j) {
            double ds, diff;
            if (j == 0) {
                ds = kernel.s_grid[1] - kernel.s_grid[0];
                diff = row[1] - row[0];
            } else {
                ds = kernel.s_grid[j] - kernel.s_grid[j - 1];
                diff = row[j] - row[j - 1];
            }
            sq += kernel.quad_weights[j] * row[j] * row[j];
            pair += kernel.quad_weights[j] * row[j] * (diff / ds);
        }
        hist_sq[k] = sq;
        hist_pair[k] = pair;
    }

    for (std::size_t k = 0; k < n; ++k) {
        const double lam = basis.eigenvalues[k];
        const double uk2 = u[k] * u[k];
        rec.u_l2_sq += uk2;
        rec.u_h1_sq += lam * uk2;
        rec.u_h2_sq += lam * lam * uk2;
        rec.eta_mu1_sq += lam * hist_sq[k];
        rec.eta_mu2_sq += lam * lam * hist_sq[k];
        rec.dafermos_pairing_mu1 += lam * hist_pair[k];
    }
    rec.e1 = rec.u_l2_sq + rec.u_h1_sq + rec.eta_mu1_sq;
    rec.e2 = rec.u_h1_sq + rec.u_h2_sq + rec.eta_mu2_sq;
    rec.lyapunov = rec.u_h1_sq - 2.0 * potential_integral(nl, u, basis);

    rec.tails.reserve(tail_cutoffs.size());
    for (std::size_t cutoff : tail_cutoffs) {
        if (cutoff > n) throw IndexError("energy: tail cutoff exceeds basis size");
        double tail = 0.0;
        for (std::size_t k = cutoff; k < n; ++k) {
            const double lam = basis.eigenvalues[k];
            tail += lam * u[k] * u[k] + lam * lam * (u[k] * u[k] + hist_sq[k]);
        }
        rec.tails.push_back(tail);
    }
    return rec;
}

AbsorbingEstimate absorbing_estimate(const ModeBasis& basis, const NonlinearitySpec& nl,
                                     double gamma, const std::vector<double>& forcing,
                                     double M1, double m2) {
    if (forcing.size() != basis.size())
        throw ShapeError("absorbing_estimate: forcing length mismatch");
    AbsorbingEstimate est;
    const double lambda1 = basis.lambda1;
    est.alpha1 = std::min(lambda1 * nl.nu / (1.0 + lambda1), gamma);
    est.beta2 = std::min(lambda1 / (1.0 + lambda1), gamma);
    est.sigma = 1.0 - nl.beta / 5.0;
    double f_sq = 0.0;
    for (double fk : forcing) f_sq += fk * fk;
    est.m1 = f_sq;
    est.m2 = m2;
    // c1 from the pointwise scan is per unit volume; the energy estimate uses
    // the integrated constant.
    const double c1_int = nl.c1 * basis.domain.volume();
    const double source = 2.0 * c1_int + f_sq / lambda1;
    est.rho1_sq = 2.0 / est.alpha1 * source;
    est.rho2_sq = 2.0 * ((1.0 / est.sigma) * est.m1 * gronwall_c(est.beta2) +
                         std::pow(m2 * gronwall_c(est.beta2 * est.sigma), 1.0 / est.sigma));
    if (source <= 0.0) {
        est.degenerate = true;
        est.t0 = std::numeric_limits<double>::infinity();
    } else {
        est.t0 = std::max(0.0, std::log(M1 * est.alpha1 / source) / est.alpha1);
    }
    return est;
}

double gronwall_c(double nu) {
    if (!(nu > 0.0)) throw DomainArgError("gronwall_c: nu must be positive");
    return std::exp(nu) / (1.0 - std::exp(-nu));
}

double gronwall_bound(double phi_tau, double eps, double sigma, double m1, double m2,
                      double elapsed) {
    if (!(eps > 0.0)) throw DomainArgError("gronwall_bound: eps must be positive");
    if (!(sigma > 0.0) || sigma > 1.0)
        throw DomainArgError("gronwall_bound: sigma must lie in (0, 1]");
    if (sigma == 1.0 && m2 != 0.0)
        throw DomainArgError("gronwall_bound: sigma = 1 is the classical case and needs m2 = 0");
    const double homogeneous = (1.0 / sigma) * phi_tau * std::exp(-eps * elapsed);
    const double source1 = (1.0 / sigma) * m1 * gronwall_c(eps);
    const double source2 =
        (m2 == 0.0) ? 0.0 : std::pow(m2 * gronwall_c(eps * sigma), 1.0 / sigma);
    return homogeneous + source1 + source2;
}

double tail_energy(const State& u, const History& h, std::size_t cutoff, const KernelSpec& kernel,
                   const ModeBasis& basis) {
    if (u.size() != basis.size() || h.n_modes != basis.size())
        throw ShapeError("tail_energy: size mismatch");
    if (cutoff > basis.size()) throw IndexError("tail_energy: cutoff exceeds basis size");
    double acc = 0.0;
    for (std::size_t k = cutoff; k < basis.size(); ++k) {
        const double lam = basis.eigenvalues[k];
        const double* row = h.row(k);
        double sq = 0.0;
        for (std::size_t j = 0; j < h.n_points; ++j)
            sq += kernel.quad_weights[j] * row[j] * row[j];
        acc += lam * u[k] * u[k] + lam * lam * (u[k] * u[k] + sq);
    }
    return acc;
}

}  // namespace memdiff
