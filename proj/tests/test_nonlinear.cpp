#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "memdiff/errors.hpp"
#include "memdiff/nonlinear.hpp"
#include "memdiff/rng.hpp"
#include "support/oracles.hpp"

using namespace memdiff;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("cubic well is accepted with full margin") {
    const NonlinearitySpec spec = validate_nonlinearity({0.0, 0.0, -1.0}, 3.0);
    CHECK(spec.degree == 3);
    CHECK(spec.beta == doctest::Approx(3.0));
    CHECK(spec.nu == doctest::Approx(1.0));
    CHECK(spec.c1 <= 1e-9);
}

TEST_CASE("u - u^3 at lambda1 = 3 gets nu = 2/3") {
    const NonlinearitySpec spec = validate_nonlinearity({1.0, 0.0, -1.0}, 3.0);
    CHECK(spec.nu == doctest::Approx(2.0 / 3.0).epsilon(1e-4));
    CHECK(spec.c1 <= 1e-9);
}

TEST_CASE("rejections of the dissipation and growth conditions") {
    CHECK_THROWS_AS(validate_nonlinearity({4.0}, 3.0), InvalidSpecError);       // slope above lambda1
    CHECK_THROWS_AS(validate_nonlinearity({0.0, 1.0}, 3.0), InvalidSpecError);  // even leading term
    CHECK_THROWS_AS(validate_nonlinearity({0.0, 0.0, 1.0}, 3.0), InvalidSpecError);  // +u^3
    CHECK_THROWS_AS(validate_nonlinearity({0.0, 0.0, 0.0, 1.0}, 3.0), InvalidSpecError);
    CHECK_THROWS_AS(validate_nonlinearity({0.0, 0.0, 0.0, 0.0, 1.0}, 3.0),
                    InvalidSpecError);  // degree 5
    // slope equal to lambda1 fails the margin floor
    CHECK_THROWS_AS(validate_nonlinearity({3.0}, 3.0), InvalidSpecError);
    // barely admissible slope passes
    CHECK_NOTHROW(validate_nonlinearity({2.9}, 3.0));
}

TEST_CASE("zero nonlinearity is linear-friendly") {
    const NonlinearitySpec spec = validate_nonlinearity({}, 1.0);
    CHECK(spec.is_zero());
    CHECK(spec.nu == doctest::Approx(1.0));
    CHECK(spec.beta == doctest::Approx(1.0));
    CHECK(spec.c1 == 0.0);
}

TEST_CASE("accepted specs verify the scan invariants") {
    for (const auto& coeffs :
         {std::vector<double>{0.0, 0.0, -1.0}, std::vector<double>{0.5, 0.3, -0.8},
          std::vector<double>{-2.0}}) {
        const NonlinearitySpec spec = validate_nonlinearity(coeffs, 2.0);
        for (int i = 0; i <= 2000; ++i) {
            const double u = -1e3 + i * 1.0;
            CHECK(std::abs(spec.g(u)) <=
                  spec.growth_c * (1.0 + std::pow(std::abs(u), spec.beta)) * (1.0 + 1e-12));
            CHECK(std::abs(spec.g_prime(u)) <=
                  spec.growth_c * (1.0 + u * u * u * u) * (1.0 + 1e-12));
            CHECK(u * spec.g(u) <=
                  (1.0 - spec.nu) * 2.0 * u * u + spec.c1 + 1e-9 * (1.0 + u * u));
        }
    }
}

TEST_CASE("applying g in mode space") {
    const ModeBasis basis = make_basis(make_box(1, {kPi}), {8});

    SUBCASE("zero state maps to zero") {
        const NonlinearitySpec cubic = validate_nonlinearity({0.0, 0.0, -1.0}, 1.0);
        const State out = apply_nonlinearity(cubic, State(basis.size()), basis);
        for (std::size_t k = 0; k < out.size(); ++k) CHECK(out[k] == 0.0);
    }
    SUBCASE("linear g is diagonal") {
        const NonlinearitySpec lin = validate_nonlinearity({0.5}, 1.0);
        Rng rng(5);
        State u(basis.size());
        for (double& c : u.coeffs) c = rng.next_symmetric();
        const State out = apply_nonlinearity(lin, u, basis);
        for (std::size_t k = 0; k < u.size(); ++k)
            CHECK(out[k] == doctest::Approx(0.5 * u[k]).epsilon(1e-14));
    }
    SUBCASE("cubic of a single mode matches the closed form and dense quadrature") {
        const NonlinearitySpec cubic = validate_nonlinearity({0.0, 0.0, -1.0}, 1.0);
        State u(basis.size());
        u[0] = 1.0;
        const State out = apply_nonlinearity(cubic, u, basis);
        // -u^3 for u = sqrt(2/pi) sin x: coefficients -3/(2 pi) and +1/(2 pi)
        CHECK(out[0] == doctest::Approx(-3.0 / (2.0 * kPi)).epsilon(1e-12));
        CHECK(out[2] == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-12));
        CHECK(std::abs(out[1]) <= 1e-13);

        for (std::size_t k = 0; k < basis.size(); ++k) {
            const double mode = static_cast<double>(k + 1);
            const double quad = oracles::simpson(
                [&](double x) {
                    const double ux = std::sqrt(2.0 / kPi) * std::sin(x);
                    return -ux * ux * ux * std::sqrt(2.0 / kPi) * std::sin(mode * x);
                },
                0.0, kPi, 4000);
            CHECK(out[k] == doctest::Approx(quad).epsilon(1e-8));
        }
    }
}

namespace {

// Worst-case coefficient error of apply_nonlinearity against the continuum
// Galerkin inner products, computed by dense quadrature.
double galerkin_gap(const NonlinearitySpec& spec, const ModeBasis& basis, const State& u,
                    const TransformPlan* plan = nullptr) {
    const State out = plan ? apply_nonlinearity(spec, u, basis, *plan)
                           : apply_nonlinearity(spec, u, basis);
    double max_err = 0.0;
    for (std::size_t k = 0; k < basis.size(); ++k) {
        const double mode = static_cast<double>(k + 1);
        const double quad = oracles::simpson(
            [&](double x) {
                double ux = 0.0;
                for (std::size_t j = 0; j < basis.size(); ++j)
                    ux += u[j] * std::sqrt(2.0 / kPi) * std::sin((j + 1) * x);
                return spec.g(ux) * std::sqrt(2.0 / kPi) * std::sin(mode * x);
            },
            0.0, kPi, 8000);
        max_err = std::max(max_err, std::abs(out[k] - quad));
    }
    return max_err;
}

}  // namespace

TEST_CASE("dealiasing: odd polynomials match the direct Galerkin oracle to 1e-8") {
    const ModeBasis basis = make_basis(make_box(1, {kPi}), {16});
    const NonlinearitySpec spec = validate_nonlinearity({0.5, 0.0, -1.0}, 1.0);
    Rng rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        State u(basis.size());
        for (double& c : u.coeffs) c = 0.5 * rng.next_symmetric();
        CHECK(galerkin_gap(spec, basis, u) <= 1e-8);
    }
}

TEST_CASE("even terms converge quadratically to the Galerkin projection") {
    // A quadratic term has odd-parity sine components; the interior-point
    // quadrature resolves them at O(n^-2) rather than exactly.
    const ModeBasis basis = make_basis(make_box(1, {kPi}), {8});
    const NonlinearitySpec spec = validate_nonlinearity({0.0, 0.5, -1.0}, 1.0);
    Rng rng(29);
    State u(basis.size());
    for (double& c : u.coeffs) c = 0.5 * rng.next_symmetric();
    const TransformPlan coarse(basis, {64, 0, 0});
    const TransformPlan fine(basis, {256, 0, 0});
    const double e_coarse = galerkin_gap(spec, basis, u, &coarse);
    const double e_fine = galerkin_gap(spec, basis, u, &fine);
    CHECK(e_coarse <= 1e-2);
    CHECK(e_coarse / e_fine >= 8.0);  // ~16 for an O(n^-2) residual
}

TEST_CASE("dealias grid sizes") {
    CHECK(dealias_points(8, 3) == 16);   // cubic: the 2m rule
    CHECK(dealias_points(8, 1) == 8);
    CHECK(dealias_points(8, 4) == 20);   // quartic needs 5m/2
    CHECK(dealias_points(3, 3) == 6);
}

TEST_CASE("potential integral") {
    const ModeBasis basis = make_basis(make_box(1, {kPi}), {4});
    const NonlinearitySpec cubic = validate_nonlinearity({0.0, 0.0, -1.0}, 1.0);

    SUBCASE("zero state") { CHECK(potential_integral(cubic, State(basis.size()), basis) == 0.0); }
    SUBCASE("quartic well depth of one sine mode") {
        State u(basis.size());
        u[0] = 1.0;
        // G = -u^4/4; int over (0,pi) of (2/pi)^2 sin^4 / 4 = 3/(8 pi)
        const double expected = -3.0 / (8.0 * kPi);
        CHECK(potential_integral(cubic, u, basis) == doctest::Approx(expected).epsilon(1e-12));
        const double quad = oracles::simpson(
            [&](double x) {
                const double ux = std::sqrt(2.0 / kPi) * std::sin(x);
                return -0.25 * ux * ux * ux * ux;
            },
            0.0, kPi, 4000);
        CHECK(potential_integral(cubic, u, basis) == doctest::Approx(quad).epsilon(1e-10));
    }
    SUBCASE("homogeneity: cubic g scales the potential by the fourth power") {
        Rng rng(19);
        State u(basis.size());
        for (double& c : u.coeffs) c = rng.next_symmetric();
        State two = u;
        for (double& c : two.coeffs) c *= 2.0;
        CHECK(potential_integral(cubic, two, basis) ==
              doctest::Approx(16.0 * potential_integral(cubic, u, basis)).epsilon(1e-12));
    }
}

TEST_CASE("chain rule: d/dt int G matches (g(u), du/dt)") {
    const ModeBasis basis = make_basis(make_box(1, {kPi}), {6});
    const NonlinearitySpec spec = validate_nonlinearity({0.2, 0.0, -1.0}, 1.0);
    Rng rng(23);
    State u(basis.size()), v(basis.size());
    for (double& c : u.coeffs) c = rng.next_symmetric();
    for (double& c : v.coeffs) c = rng.next_symmetric();

    const State gu = apply_nonlinearity(spec, u, basis);
    double exact = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) exact += gu[k] * v[k];

    const double dt = 1e-5;
    State up = u;
    for (std::size_t k = 0; k < u.size(); ++k) up[k] += dt * v[k];
    const double fd =
        (potential_integral(spec, up, basis) - potential_integral(spec, u, basis)) / dt;
    CHECK(std::abs(fd - exact) <= 50.0 * dt);
}
