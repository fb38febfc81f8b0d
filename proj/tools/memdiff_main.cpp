#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "memdiff/config.hpp"
#include "memdiff/harness.hpp"
#include "memdiff/plot.hpp"
#include "memdiff/report_io.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    long long seed = -1;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "config file path")->required();
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--seed", opts.seed, "override the config seed");
    cmd->add_flag("--quiet", opts.quiet, "suppress progress output");
}

memdiff::FileConfig load(const CommonOpts& opts) {
    memdiff::FileConfig cfg = memdiff::parse_config(opts.config_path);
    if (opts.seed >= 0) cfg.sim.seed = static_cast<std::uint64_t>(opts.seed);
    return cfg;
}

std::string joined(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

int run_simulate(const CommonOpts& opts) {
    memdiff::FileConfig cfg = load(opts);
    std::filesystem::create_directories(opts.out_dir);
    memdiff::write_manifest(cfg, joined(opts.out_dir, "manifest.txt"));
    auto [u0, h0] = memdiff::initial_data(cfg);
    try {
        const memdiff::Trajectory traj = memdiff::evolve(cfg.sim, u0, h0);
        const std::string csv = joined(opts.out_dir, "series.csv");
        memdiff::write_csv(traj.records, cfg.sim.tail_cutoffs, csv);
        memdiff::plot_series(csv, memdiff::PlotKind::Energy, joined(opts.out_dir, "energy.svg"));
        if (!opts.quiet) {
            const auto& last = traj.records.back();
            std::cout << "simulate: " << traj.records.size() << " records to t = " << last.t
                      << ", E1 = " << last.e1 << ", E2 = " << last.e2 << "\n";
        }
    } catch (const memdiff::DivergenceError& err) {
        if (err.partial)
            memdiff::write_csv(err.partial->records, cfg.sim.tail_cutoffs,
                               joined(opts.out_dir, "series.csv"));
        std::cerr << "simulate: " << err.what() << "\n";
        return 1;
    }
    return 0;
}

int finish(const memdiff::ExperimentReport& report, const CommonOpts& opts) {
    if (!opts.quiet)
        std::cout << report.scenario << ": " << (report.pass ? "PASS" : "FAIL") << "\n"
                  << report.details.dump(2) << "\n";
    return report.pass ? 0 : 1;
}

int run_check_kernel(const CommonOpts& opts) {
    memdiff::FileConfig cfg = load(opts);
    const memdiff::KernelReport report = memdiff::validate_kernel(cfg.sim.kernel);
    if (!opts.quiet) {
        std::cout << "kernel: " << report.summary() << "\n";
        std::cout << "  s_max = " << cfg.sim.kernel.s_max
                  << ", gamma = " << cfg.sim.kernel.gamma
                  << ", mass = " << cfg.sim.kernel.mass() << "\n";
    }
    return report.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral simulator and verification harness for nonclassical diffusion with memory"};
    app.require_subcommand(1);

    CommonOpts opts;
    auto* simulate = app.add_subcommand("simulate", "run one trajectory and emit diagnostics");
    auto* absorb = app.add_subcommand("absorb", "absorbing-ball ensemble experiment");
    auto* tail = app.add_subcommand("tail", "spectral tail-decay experiment");
    auto* depend = app.add_subcommand("depend", "continuous-dependence experiment");
    auto* oracle = app.add_subcommand("oracle", "linear closed-form validation");
    auto* check_kernel = app.add_subcommand("check-kernel", "validate the memory kernel");
    auto* gronwall = app.add_subcommand("gronwall", "synthetic Gronwall-bound check");
    for (auto* cmd : {simulate, absorb, tail, depend, oracle, check_kernel, gronwall})
        add_common(cmd, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return run_simulate(opts);
        if (check_kernel->parsed()) return run_check_kernel(opts);
        if (absorb->parsed()) return finish(memdiff::run_absorbing(load(opts), opts.out_dir), opts);
        if (tail->parsed()) return finish(memdiff::run_tail(load(opts), opts.out_dir), opts);
        if (depend->parsed()) return finish(memdiff::run_dependence(load(opts), opts.out_dir), opts);
        if (oracle->parsed()) return finish(memdiff::run_oracle(load(opts), opts.out_dir), opts);
        if (gronwall->parsed()) {
            memdiff::FileConfig cfg = load(opts);
            return finish(
                memdiff::run_gronwall(cfg.experiment.gronwall_draws, cfg.sim.seed, opts.out_dir),
                opts);
        }
    } catch (const memdiff::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 2;
}
