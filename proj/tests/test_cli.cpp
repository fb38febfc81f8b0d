#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "memdiff/config.hpp"
#include "memdiff/plot.hpp"
#include "memdiff/report_io.hpp"

using namespace memdiff;

TEST_CASE("minimal config parses to the documented defaults") {
    const FileConfig cfg = parse_config_text("");
    CHECK(cfg.sim.basis.domain.dims == 1);
    CHECK(cfg.sim.basis.lambda1 == doctest::Approx(1.0));
    CHECK(cfg.sim.kernel.gamma == doctest::Approx(1.0));
    CHECK(cfg.sim.nonlinearity.degree == 3);
    CHECK(cfg.sim.kernel.points() == 512);
    const std::string manifest = render_manifest(cfg);
    CHECK(manifest.find("lambda1 = 1") != std::string::npos);
    CHECK(manifest.find("gamma = 1") != std::string::npos);
}

TEST_CASE("config errors cite the failed admissibility condition") {
    try {
        parse_config_text("kernel.terms = [[1, -1]]\n");
        FAIL("expected rejection");
    } catch (const InvalidSpecError& err) {
        CHECK(std::string(err.what()).find("C^1") != std::string::npos);
    }
    try {
        parse_config_text("domain.lengths = [3.14159265]\nnonlinearity.coeffs = [4]\n");
        FAIL("expected rejection");
    } catch (const InvalidSpecError& err) {
        CHECK(std::string(err.what()).find("limsup") != std::string::npos);
    }
}

TEST_CASE("unknown or malformed keys are diagnosed by name") {
    CHECK_THROWS_WITH_AS(parse_config_text("mystery.key = 3\n"),
                         doctest::Contains("mystery.key"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("time.dt = fast\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("time.dt = [1, 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("basis.modes 8\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("forcing.modes = [[99, 1.0]]\n"), ConfigError);
}

TEST_CASE("manifest round-trips through the parser") {
    const FileConfig cfg = parse_config_text(
        "domain.dims = 2\n"
        "domain.lengths = [3.141592653589793, 2.0]\n"
        "basis.modes = [4, 3]\n"
        "kernel.terms = [[1, 1], [0.5, 2.5]]\n"
        "kernel.s_points = 96\n"
        "nonlinearity.coeffs = [0.25, 0, -1]\n"
        "forcing.modes = [[1, 1, 0.75]]\n"
        "time.dt = 0.004\n"
        "time.t_end = 2.5\n"
        "seed = 97\n"
        "diagnostics.cutoffs = [2, 5]\n");
    const std::string rendered = render_manifest(cfg);
    const FileConfig again = parse_config_text(rendered);
    CHECK(render_manifest(again) == rendered);
    CHECK(again.sim.seed == 97);
    CHECK(again.sim.dt == cfg.sim.dt);
    CHECK(again.sim.basis.eigenvalues == cfg.sim.basis.eigenvalues);
    CHECK(again.sim.forcing == cfg.sim.forcing);
    CHECK(again.sim.tail_cutoffs == cfg.sim.tail_cutoffs);
}

TEST_CASE("csv schema and determinism") {
    const std::vector<std::size_t> cutoffs = {8};
    CHECK(csv_header(cutoffs) ==
          "t,u_l2_sq,u_h1_sq,u_h2_sq,eta_mu1_sq,eta_mu2_sq,E1,E2,lyapunov,tail_E_m8");

    SUBCASE("empty trajectory renders the header only") {
        CHECK(render_csv({}, cutoffs) == csv_header(cutoffs) + "\n");
    }
    SUBCASE("one record renders two lines, re-emission is identical") {
        EnergyRecord rec;
        rec.t = 0.125;
        rec.u_l2_sq = 1.0 / 3.0;
        rec.e1 = 0.7;
        rec.tails = {1e-17};
        const std::string a = render_csv({rec}, cutoffs);
        const std::string b = render_csv({rec}, cutoffs);
        CHECK(a == b);
        CHECK(std::count(a.begin(), a.end(), '\n') == 2);
    }
    SUBCASE("values round-trip bit-exactly through the file") {
        EnergyRecord rec;
        rec.t = 0.1;  // not representable exactly; shortest form must round-trip
        rec.u_l2_sq = 1.0 / 3.0;
        rec.u_h2_sq = 3.0e-300;
        rec.tails = {2.2250738585072014e-308};
        const std::string path =
            (std::filesystem::temp_directory_path() / "memdiff_csv_test.csv").string();
        write_csv({rec}, cutoffs, path);
        const CsvTable table = read_csv(path);
        CHECK(table.column("t")[0] == 0.1);
        CHECK(table.column("u_l2_sq")[0] == 1.0 / 3.0);
        CHECK(table.column("u_h2_sq")[0] == 3.0e-300);
        CHECK(table.column("tail_E_m8")[0] == 2.2250738585072014e-308);
        std::remove(path.c_str());
    }
}

TEST_CASE("plots render without crashing on edge inputs") {
    CsvTable energy;
    energy.columns = {"t", "E1", "E2"};
    energy.rows = {{0.0, 4.0, 12.0}, {1.0, 2.0, 6.0}, {2.0, 1.0, 3.0}};
    const std::string svg = render_plot(energy, PlotKind::Energy);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("zeros clipped") == std::string::npos);

    CsvTable single;
    single.columns = {"t", "E1", "E2"};
    single.rows = {{0.0, 4.0, 12.0}};
    const std::string dot = render_plot(single, PlotKind::Energy);
    CHECK(dot.find("circle") != std::string::npos);

    CsvTable tail;
    tail.columns = {"cutoff", "lambda_next", "sup_tail"};
    tail.rows = {{4, 25.0, 1e-3}, {8, 81.0, 0.0}};
    const std::string clipped = render_plot(tail, PlotKind::Tail);
    CHECK(clipped.find("zeros clipped") != std::string::npos);
}

TEST_CASE("trajectory files parse into time-stamped states") {
    const std::string path =
        (std::filesystem::temp_directory_path() / "memdiff_traj_test.txt").string();
    write_text_file(path, "# past trajectory\n-2 1 0\n-1 0.5 0.25\n0 0 0\n");
    const auto samples = read_trajectory_file(path, 2);
    REQUIRE(samples.size() == 3);
    CHECK(samples[0].first == -2.0);
    CHECK(samples[1].second[1] == 0.25);
    CHECK_THROWS_AS(read_trajectory_file(path, 3), ConfigError);
    std::remove(path.c_str());
}

TEST_CASE("initial data honors the init section") {
    FileConfig cfg = parse_config_text(
        "basis.modes = [6]\ninit.u0 = modes\ninit.u0_modes = [[2, 1.5]]\ninit.history = zero\n");
    const auto [u0, h0] = initial_data(cfg);
    CHECK(u0[1] == 1.5);
    CHECK(u0[0] == 0.0);
    for (double v : h0.values) CHECK(v == 0.0);

    FileConfig rnd = parse_config_text("basis.modes = [9]\ninit.scale = 0.25\nseed = 3\n");
    const auto [ur, hr] = initial_data(rnd);
    for (std::size_t k = 3; k < 9; ++k) CHECK(ur[k] == 0.0);  // band-limited to the lowest third
    bool any = false;
    for (std::size_t k = 0; k < 3; ++k) any = any || ur[k] != 0.0;
    CHECK(any);
    CHECK(hr.row(0)[5] == doctest::Approx(rnd.sim.kernel.s_grid[5] * ur[0]));
}
