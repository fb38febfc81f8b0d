#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "memdiff/errors.hpp"
#include "memdiff/field.hpp"
#include "memdiff/rng.hpp"
#include "support/oracles.hpp"

using namespace memdiff;

namespace {
constexpr double kPi = 3.14159265358979323846;

ModeBasis line_basis(int m) { return make_basis(make_box(1, {kPi}), {m}); }

KernelSpec hand_kernel(std::vector<double> grid) {
    KernelSpec k;
    k.terms = {{1.0, 1.0}};
    k.delta = k.gamma = 1.0;
    k.tail_tol = 1.0;
    k.s_max = grid.back();
    k.s_grid = std::move(grid);
    k.quad_weights = quadrature_weights(k);
    k.term_weights = {k.quad_weights};
    return k;
}

State unit_mode(std::size_t n, std::size_t k) {
    State u(n);
    u[k] = 1.0;
    return u;
}
}  // namespace

TEST_CASE("constant past history is s * u0") {
    const KernelSpec k = hand_kernel({0.0, 1.0, 2.0, 3.0, 4.0});
    const State u0 = unit_mode(2, 0);
    const History h = history_from_constant_past(u0, k);
    CHECK(h.row(0)[2] == doctest::Approx(2.0));  // eta_1(s = 2) = 2
    CHECK(h.row(0)[0] == 0.0);
    for (std::size_t j = 0; j < k.points(); ++j) CHECK(h.row(1)[j] == 0.0);

    const History hz = history_from_constant_past(State(2), k);
    for (double v : hz.values) CHECK(v == 0.0);
}

TEST_CASE("past-trajectory reconstruction") {
    const KernelSpec k = make_kernel({{1.0, 1.0}}, 1e-8, 129);

    SUBCASE("constant past matches the closed form") {
        const State u0 = unit_mode(1, 0);
        std::vector<std::pair<double, State>> samples;
        for (int i = 0; i <= 40; ++i)
            samples.emplace_back(-k.s_max + i * k.s_max / 40.0, u0);
        const History direct = history_from_constant_past(u0, k);
        const History integ = history_from_past_trajectory(samples, k);
        for (std::size_t j = 0; j < k.points(); ++j)
            CHECK(integ.row(0)[j] == doctest::Approx(direct.row(0)[j]).epsilon(1e-12));
    }

    SUBCASE("linear past u(t) = t integrates to -s^2/2 exactly") {
        std::vector<std::pair<double, State>> samples;
        for (int i = 0; i <= 200; ++i) {
            const double t = -k.s_max + i * k.s_max / 200.0;
            State u(1);
            u[0] = t;
            samples.emplace_back(t, u);
        }
        const History h = history_from_past_trajectory(samples, k);
        for (std::size_t j = 0; j < k.points(); ++j) {
            const double s = k.s_grid[j];
            CHECK(h.row(0)[j] == doctest::Approx(-0.5 * s * s).epsilon(1e-10));
        }
    }

    SUBCASE("insufficient coverage is a domain error") {
        const State u0 = unit_mode(1, 0);
        CHECK_THROWS_AS(history_from_past_trajectory({{-1.0, u0}}, k), DomainArgError);
        CHECK_THROWS_AS(history_from_past_trajectory({{-1.0, u0}, {0.0, u0}}, k),
                        DomainArgError);  // does not reach -s_max
    }
}

TEST_CASE("memory integral against analytic moments") {
    const KernelSpec k = make_kernel({{1.0, 1.0}}, 1e-8, 1025);

    SUBCASE("eta = s e1 gives Gamma(2) = 1") {
        History h(1, k.points());
        for (std::size_t j = 0; j < k.points(); ++j) h.row(0)[j] = k.s_grid[j];
        CHECK(std::abs(memory_integral(h, k)[0] - 1.0) <= 1e-4);
    }
    SUBCASE("zero history integrates to zero") {
        const History h(3, k.points());
        for (double m : memory_integral(h, k)) CHECK(m == 0.0);
    }
    SUBCASE("eta = 1 - e^{-s} gives 1/2, cross-checked by refined quadrature") {
        auto fill = [](const KernelSpec& kk) {
            History h(1, kk.points());
            for (std::size_t j = 0; j < kk.points(); ++j)
                h.row(0)[j] = 1.0 - std::exp(-kk.s_grid[j]);
            return h;
        };
        const double coarse = memory_integral(fill(k), k)[0];
        CHECK(std::abs(coarse - 0.5) <= 1e-4);
        const KernelSpec fine = make_kernel({{1.0, 1.0}}, 1e-8, 8193);
        const double refined = memory_integral(fill(fine), fine)[0];
        CHECK(std::abs(coarse - refined) <= 1e-4);
    }
    SUBCASE("grid mismatch is a shape error") {
        const History h(1, 7);
        CHECK_THROWS_AS(memory_integral(h, k), ShapeError);
    }
}

TEST_CASE("weighted history norm") {
    const ModeBasis basis = line_basis(1);  // lambda_1 = 1 on (0, pi)
    const KernelSpec k = make_kernel({{1.0, 1.0}}, 1e-8, 2049);

    History h(1, k.points());
    for (std::size_t j = 0; j < k.points(); ++j) h.row(0)[j] = k.s_grid[j];
    const double norm1 = history_norm_sq(h, k, basis, 1);
    CHECK(std::abs(norm1 - 2.0) <= 1e-4);  // int e^{-s} s^2 = Gamma(3)

    CHECK(history_norm_sq(History(1, k.points()), k, basis, 1) == 0.0);

    History h2 = h;
    for (double& v : h2.values) v *= 2.0;
    CHECK(history_norm_sq(h2, k, basis, 1) == doctest::Approx(4.0 * norm1).epsilon(1e-12));

    CHECK_THROWS_AS(history_norm_sq(h, k, basis, 3), DomainArgError);
}

TEST_CASE("transport preserves the constant-past profile") {
    const ModeBasis basis = line_basis(3);
    const KernelSpec k = make_kernel({{1.0, 1.0}}, 1e-8, 512);
    State u0(basis.size());
    u0[0] = 0.7;
    u0[1] = -0.3;
    u0[2] = 0.1;
    History h = history_from_constant_past(u0, k);
    const History ref = h;
    for (int n = 0; n < 100; ++n) transport_step(h, u0, 0.01, k);
    double max_err = 0.0;
    for (std::size_t i = 0; i < h.values.size(); ++i)
        max_err = std::max(max_err, std::abs(h.values[i] - ref.values[i]));
    CHECK(max_err <= 1e-10);  // linear profile is a fixed point of the scheme
}

TEST_CASE("transport of the empty history follows characteristics") {
    const KernelSpec k = make_kernel({{1.0, 1.0}}, 1e-8, 512);
    History h(1, k.points());
    const State e1 = unit_mode(1, 0);
    const double dt = 0.05;
    transport_step(h, e1, dt, k);
    for (std::size_t j = 0; j < k.points(); ++j)
        CHECK(h.row(0)[j] == doctest::Approx(std::min(k.s_grid[j], dt)).epsilon(1e-13));
    CHECK(h.row(0)[0] == 0.0);
}

TEST_CASE("transport argument validation") {
    const KernelSpec k = make_kernel({{1.0, 1.0}}, 1e-8, 64);
    History h(1, k.points());
    const State u = unit_mode(1, 0);
    CHECK_THROWS_AS(transport_step(h, u, 0.0, k), DomainArgError);
    CHECK_THROWS_AS(transport_step(h, u, -0.1, k), DomainArgError);
    History bad(1, 7);
    CHECK_THROWS_AS(transport_step(bad, u, 0.1, k), ShapeError);
}

TEST_CASE("stepped history matches the trajectory reconstruction") {
    // u(t) = cos(t) e1 prescribed; transport must track int_0^s u(t - r) dr.
    const KernelSpec k = make_kernel({{1.0, 1.0}}, 1e-8, 512);
    const double dt = 1e-2;
    const int n_steps = 300;
    State u(1);
    u[0] = 1.0;
    History h = history_from_constant_past(u, k);  // consistent with u(t<=0) = 1
    std::vector<std::pair<double, State>> samples;
    samples.emplace_back(0.0, u);
    for (int n = 1; n <= n_steps; ++n) {
        const double t = n * dt;
        u[0] = std::cos(t);
        transport_step(h, u, dt, k);
        samples.emplace_back(t, u);
    }
    // reconstruct: past of t_end seen as lag, with u = 1 for t <= 0
    const double t_end = n_steps * dt;
    std::vector<std::pair<double, State>> past;
    State one(1);
    one[0] = 1.0;
    past.emplace_back(-k.s_max - 1.0, one);
    past.emplace_back(-t_end - 1e-9, one);
    for (const auto& [t, state] : samples) past.emplace_back(t - t_end, state);
    const History rebuilt = history_from_past_trajectory(past, k);

    double max_err = 0.0;
    for (std::size_t j = 0; j < k.points(); ++j)
        max_err = std::max(max_err, std::abs(h.row(0)[j] - rebuilt.row(0)[j]));
    const double ds = k.s_grid[1] - k.s_grid[0];
    CHECK(max_err <= 5.0 * (ds + dt) * 1.0);
}

TEST_CASE("history pairing against the equality-case kernel") {
    const ModeBasis basis = line_basis(1);
    const KernelSpec k = make_kernel({{1.0, 1.0}}, 1e-8, 2049);

    SUBCASE("eta = s e1: pairing 1, norm 2, equality at gamma = 1") {
        History h(1, k.points());
        for (std::size_t j = 0; j < k.points(); ++j) h.row(0)[j] = k.s_grid[j];
        const double pairing = dafermos_pairing(h, k, basis, 1);
        const double norm = history_norm_sq(h, k, basis, 1);
        CHECK(std::abs(pairing - 1.0) <= 1e-3);
        CHECK(std::abs(norm - 2.0) <= 1e-3);
        CHECK(pairing >= 0.5 * k.gamma * norm - 1e-3 * norm);
    }
    SUBCASE("zero history pairs to zero") {
        CHECK(dafermos_pairing(History(1, k.points()), k, basis, 1) == 0.0);
    }
    SUBCASE("saturating history still satisfies the inequality") {
        History h(1, k.points());
        for (std::size_t j = 0; j < k.points(); ++j)
            h.row(0)[j] = 1.0 - std::exp(-k.s_grid[j]);
        const double pairing = dafermos_pairing(h, k, basis, 1);
        const double norm = history_norm_sq(h, k, basis, 1);
        CHECK(pairing >= 0.5 * norm - 1e-3);
        // analytic equality: both sides are 1/6
        CHECK(std::abs(pairing - 1.0 / 6.0) <= 1e-3);
    }
    SUBCASE("needs at least two grid points") {
        KernelSpec tiny = k;
        tiny.s_grid = {0.0};
        tiny.quad_weights = {1.0};
        const History h(1, 1);
        CHECK_THROWS_AS(dafermos_pairing(h, tiny, basis, 1), DomainArgError);
    }
}

TEST_CASE("pairing margin grows for faster-decaying kernels") {
    const ModeBasis basis = line_basis(1);
    const KernelSpec slow = make_kernel({{1.0, 1.0}}, 1e-8, 1025);
    const KernelSpec fast = make_kernel({{1.0, 2.0}}, 1e-8, 1025);
    const double gamma_ref = 1.0;  // reference rate of the slow kernel

    auto margin = [&](const KernelSpec& k) {
        State u0(1);
        u0[0] = 1.0;
        const History h = history_from_constant_past(u0, k);
        return dafermos_pairing(h, k, basis, 1) -
               0.5 * gamma_ref * history_norm_sq(h, k, basis, 1);
    };
    const double m_slow = margin(slow);
    const double m_fast = margin(fast);
    CHECK(m_fast > m_slow + 0.01);
    CHECK(std::abs(m_slow) <= 1e-3);  // equality case
}

TEST_CASE("per-term moments sum to the memory integral") {
    Rng rng(3);
    const KernelSpec k = make_kernel({{1.0, 1.0}, {0.4, 3.0}}, 1e-8, 257);
    History h(4, k.points());
    for (double& v : h.values) v = rng.next_symmetric();
    for (std::size_t kk = 0; kk < 4; ++kk) h.row(kk)[0] = 0.0;
    std::vector<double> moments;
    per_term_moments(h, k, moments);
    const auto m = memory_integral(h, k);
    for (std::size_t j = 0; j < 4; ++j)
        CHECK(m[j] == doctest::Approx(moments[j] + moments[4 + j]).epsilon(1e-12));
}
