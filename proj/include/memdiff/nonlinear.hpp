#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "memdiff/basis.hpp"
#include "memdiff/field.hpp"

namespace memdiff {

/// Polynomial nonlinearity g(u) = a1 u + a2 u^2 + a3 u^3 + a4 u^4 (g(0) = 0 by
/// construction) together with the constants extracted by validation:
///   |g(u)|  <= growth_c (1 + |u|^beta),   beta < 5
///   |g'(u)| <= growth_c (1 + u^4)
///   u g(u)  <= (1 - nu) lambda1 u^2 + c1   pointwise (c1 per unit volume)
/// The convention is the right-hand-side one: the equation reads
/// u_t - Lap u_t - Lap u - int mu Lap eta = g(u) + f, so these conditions damp
/// the energy.
struct NonlinearitySpec {
    std::array<double, 4> coeffs{0.0, 0.0, 0.0, 0.0};  // a1..a4
    int degree = 0;
    double beta = 1.0;
    double growth_c = 0.0;
    double nu = 1.0;
    double c1 = 0.0;  // pointwise offset; multiply by |Omega| for the integrated constant

    double g(double u) const;
    double g_prime(double u) const;
    double antiderivative(double u) const;  // G(u) = int_0^u g
    bool is_zero() const { return degree == 0; }
};

/// Checks the dissipation and growth conditions against lambda1 and derives
/// (beta, growth_c, nu, c1). nu and c1 come from a 10^6-point scan of
/// u g(u) - (1 - nu) lambda1 u^2 over [-1e3, 1e3] with margin floor
/// 0.01 * lambda1, preceded by a leading-term check of the asymptotic
/// limsup g(u)/u < lambda1. Throws InvalidSpecError on rejection.
NonlinearitySpec validate_nonlinearity(const std::vector<double>& coeffs, double lambda1);

/// Smallest per-dimension collocation count that makes degree-`degree`
/// products of m retained sine modes alias-free.
int dealias_points(int m, int degree);

/// Galerkin coefficients of g(u): inverse transform to a degree-exact
/// collocation grid, pointwise polynomial, forward transform, truncate.
State apply_nonlinearity(const NonlinearitySpec& spec, const State& u, const ModeBasis& basis);
State apply_nonlinearity(const NonlinearitySpec& spec, const State& u, const ModeBasis& basis,
                         const TransformPlan& plan);

/// int_Omega G(u) dx on a collocation grid exact for the degree of G.
double potential_integral(const NonlinearitySpec& spec, const State& u, const ModeBasis& basis);

/// Plan sized for alias-free evaluation of g(u) (or of G(u) when
/// `for_potential`), never smaller than the configured collocation.
TransformPlan dealias_plan(const NonlinearitySpec& spec, const ModeBasis& basis,
                           bool for_potential = false);

}  // namespace memdiff
