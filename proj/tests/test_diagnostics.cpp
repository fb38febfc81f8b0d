#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "memdiff/diagnostics.hpp"
#include "memdiff/errors.hpp"
#include "memdiff/rng.hpp"
#include "support/oracles.hpp"

using namespace memdiff;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("energy record of elementary states") {
    const ModeBasis basis = make_basis(make_box(3, {kPi, kPi, kPi}), {2, 2, 2});
    const KernelSpec kernel = make_kernel({{1.0, 1.0}}, 1e-8, 256);
    const NonlinearitySpec nl = validate_nonlinearity({0.0, 0.0, -1.0}, basis.lambda1);

    SUBCASE("zero state and history") {
        const EnergyRecord rec =
            energy(State(basis.size()), History(basis.size(), kernel.points()), kernel, basis, nl,
                   0.0);
        CHECK(rec.e1 == 0.0);
        CHECK(rec.e2 == 0.0);
        CHECK(rec.lyapunov == 0.0);
    }
    SUBCASE("lowest eigenmode with no history: E1 = 1 + lambda1") {
        State u(basis.size());
        u[0] = 1.0;
        const EnergyRecord rec =
            energy(u, History(basis.size(), kernel.points()), kernel, basis, nl, 0.5);
        CHECK(rec.t == 0.5);
        CHECK(rec.u_l2_sq == doctest::Approx(1.0));
        CHECK(rec.u_h1_sq == doctest::Approx(3.0));
        CHECK(rec.u_h2_sq == doctest::Approx(9.0));
        CHECK(rec.e1 == doctest::Approx(4.0));
        CHECK(rec.e2 == doctest::Approx(12.0));
    }
}

TEST_CASE("constant-past history norm appears in E1") {
    const ModeBasis basis = make_basis(make_box(1, {kPi}), {1});
    const KernelSpec kernel = make_kernel({{1.0, 1.0}}, 1e-8, 2049);
    const NonlinearitySpec nl = validate_nonlinearity({}, basis.lambda1);
    State u(1);
    u[0] = 1.0;
    const History h = history_from_constant_past(u, kernel);
    const EnergyRecord rec = energy(u, h, kernel, basis, nl, 0.0);
    CHECK(std::abs(rec.eta_mu1_sq - 2.0) <= 1e-4);
    CHECK(rec.e1 == doctest::Approx(1.0 + 1.0 + rec.eta_mu1_sq));
}

TEST_CASE("absorbing constants from the energy estimates") {
    SUBCASE("cubic well on the unit cube: alpha1 = 3/4, rho1 = 0") {
        const ModeBasis basis = make_basis(make_box(3, {kPi, kPi, kPi}), {2, 2, 2});
        const NonlinearitySpec nl = validate_nonlinearity({0.0, 0.0, -1.0}, basis.lambda1);
        const AbsorbingEstimate est =
            absorbing_estimate(basis, nl, 1.0, std::vector<double>(basis.size(), 0.0), 100.0);
        CHECK(est.alpha1 == doctest::Approx(0.75));
        CHECK(est.rho1_sq == 0.0);
        CHECK(est.degenerate);
        CHECK(est.sigma == doctest::Approx(0.4));  // 1 - beta/5 with beta = 3
        CHECK(est.beta2 == doctest::Approx(0.75));
    }
    SUBCASE("reduced margin: nu = 1/2 gives alpha1 = 3/8") {
        const ModeBasis basis = make_basis(make_box(3, {kPi, kPi, kPi}), {2, 2, 2});
        NonlinearitySpec nl = validate_nonlinearity({0.0, 0.0, -1.0}, basis.lambda1);
        nl.nu = 0.5;
        const AbsorbingEstimate est =
            absorbing_estimate(basis, nl, 1.0, std::vector<double>(basis.size(), 0.0), 100.0);
        CHECK(est.alpha1 == doctest::Approx(3.0 / 8.0));
    }
    SUBCASE("entry time formula") {
        const ModeBasis basis = make_basis(make_box(1, {kPi}), {4});
        const NonlinearitySpec nl = validate_nonlinearity({0.0, 0.0, -1.0}, basis.lambda1);
        std::vector<double> f(basis.size(), 0.0);
        f[0] = 2.0;  // |f|^2 = 4, lambda1 = 1
        const AbsorbingEstimate est = absorbing_estimate(basis, nl, 1.0, f, 100.0);
        CHECK(est.alpha1 == doctest::Approx(0.5));
        CHECK(est.rho1_sq == doctest::Approx(16.0));
        CHECK(est.t0 == doctest::Approx(2.0 * std::log(100.0 * 0.5 / 4.0)).epsilon(1e-12));
        CHECK(est.m1 == doctest::Approx(4.0));
    }
}

TEST_CASE("uniform Gronwall machinery") {
    SUBCASE("C(1) evaluates to the frozen constant") {
        CHECK(std::abs(gronwall_c(1.0) - 4.30026) <= 1e-5);
        CHECK_THROWS_AS(gronwall_c(0.0), DomainArgError);
    }
    SUBCASE("homogeneous bound dominates the exponential") {
        for (double t : {0.0, 0.5, 1.0, 3.0})
            CHECK(gronwall_bound(1.0, 1.0, 0.5, 0.0, 0.0, t) ==
                  doctest::Approx(2.0 * std::exp(-t)).epsilon(1e-12));
    }
    SUBCASE("domain validation") {
        CHECK_THROWS_AS(gronwall_bound(1.0, 0.0, 0.5, 0.0, 0.0, 1.0), DomainArgError);
        CHECK_THROWS_AS(gronwall_bound(1.0, 1.0, 0.0, 0.0, 0.0, 1.0), DomainArgError);
        CHECK_THROWS_AS(gronwall_bound(1.0, 1.0, 1.5, 0.0, 0.0, 1.0), DomainArgError);
        CHECK_THROWS_AS(gronwall_bound(1.0, 1.0, 1.0, 0.0, 0.5, 1.0), DomainArgError);
        CHECK_NOTHROW(gronwall_bound(1.0, 1.0, 1.0, 0.5, 0.0, 1.0));
    }
    SUBCASE("monotone in the data, decaying in time") {
        const double base = gronwall_bound(1.0, 1.0, 0.5, 1.0, 1.0, 1.0);
        CHECK(gronwall_bound(2.0, 1.0, 0.5, 1.0, 1.0, 1.0) >= base);
        CHECK(gronwall_bound(1.0, 1.0, 0.5, 2.0, 1.0, 1.0) >= base);
        CHECK(gronwall_bound(1.0, 1.0, 0.5, 1.0, 2.0, 1.0) >= base);
        CHECK(gronwall_bound(1.0, 1.0, 0.5, 1.0, 1.0, 2.0) <= base);
    }
    SUBCASE("synthetic solutions stay below the bound") {
        Rng rng(99);
        for (int draw = 0; draw < 20; ++draw) {
            const double r1 = 0.2 + 3.0 * rng.next_unit();
            const double r2 = 0.2 + 3.0 * rng.next_unit();
            const double phi0 = 0.2 + 5.0 * rng.next_unit();
            auto phi_t = oracles::integrate_dense(
                [&](double, const std::vector<double>& y) {
                    return std::vector<double>{-y[0] + r1 +
                                               r2 * std::sqrt(std::max(y[0], 0.0))};
                },
                {phi0}, 0.0, 8.0, 1e-3);
            CHECK(phi_t[0] <= gronwall_bound(phi0, 1.0, 0.5, r1, r2, 8.0) * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("tail energy of the spectral split") {
    const ModeBasis basis = make_basis(make_box(1, {kPi}), {8});
    const KernelSpec kernel = make_kernel({{1.0, 1.0}}, 1e-8, 128);
    const NonlinearitySpec nl = validate_nonlinearity({}, basis.lambda1);
    Rng rng(31);
    State u(basis.size());
    for (double& c : u.coeffs) c = rng.next_symmetric();
    History h(basis.size(), kernel.points());
    for (std::size_t k = 0; k < h.n_modes; ++k)
        for (std::size_t j = 1; j < h.n_points; ++j)
            h.row(k)[j] = rng.next_symmetric();

    const EnergyRecord rec = energy(u, h, kernel, basis, nl, 0.0);
    CHECK(tail_energy(u, h, basis.size(), kernel, basis) == 0.0);
    CHECK(tail_energy(u, h, 0, kernel, basis) == doctest::Approx(rec.e2).epsilon(1e-12));

    double prev = tail_energy(u, h, 0, kernel, basis);
    for (std::size_t m = 1; m <= basis.size(); ++m) {
        const double t = tail_energy(u, h, m, kernel, basis);
        CHECK(t <= prev * (1.0 + 1e-12));
        prev = t;
    }

    // band-limited data has no tail above the band
    State low(basis.size());
    low[0] = 1.0;
    low[1] = -2.0;
    History hlow(basis.size(), kernel.points());
    for (std::size_t j = 0; j < kernel.points(); ++j) hlow.row(0)[j] = kernel.s_grid[j];
    CHECK(tail_energy(low, hlow, 2, kernel, basis) == 0.0);
    CHECK(tail_energy(low, hlow, 5, kernel, basis) == 0.0);
}

TEST_CASE("energy splits additively across a spectral cutoff") {
    const ModeBasis basis = make_basis(make_box(1, {kPi}), {6});
    const KernelSpec kernel = make_kernel({{1.0, 1.0}}, 1e-8, 128);
    const NonlinearitySpec lin = validate_nonlinearity({}, basis.lambda1);
    Rng rng(37);
    State u(basis.size());
    for (double& c : u.coeffs) c = rng.next_symmetric();
    History h(basis.size(), kernel.points());
    for (std::size_t k = 0; k < h.n_modes; ++k)
        for (std::size_t j = 1; j < h.n_points; ++j) h.row(k)[j] = rng.next_symmetric();

    const std::size_t m = 3;
    const auto split = project_split(basis, u.coeffs, m);
    State lo{split.low}, hi{split.high};
    History hlo(h.n_modes, h.n_points), hhi(h.n_modes, h.n_points);
    for (std::size_t k = 0; k < h.n_modes; ++k)
        for (std::size_t j = 0; j < h.n_points; ++j)
            (k < m ? hlo : hhi).row(k)[j] = h.row(k)[j];

    const EnergyRecord full = energy(u, h, kernel, basis, lin, 0.0);
    const EnergyRecord a = energy(lo, hlo, kernel, basis, lin, 0.0);
    const EnergyRecord b = energy(hi, hhi, kernel, basis, lin, 0.0);
    CHECK(full.e1 == doctest::Approx(a.e1 + b.e1).epsilon(1e-10));
    CHECK(full.e2 == doctest::Approx(a.e2 + b.e2).epsilon(1e-10));
}
