#pragma once

#include <string>
#include <utility>
#include <vector>

#include "memdiff/solver.hpp"

namespace memdiff {

struct InitSpec {
    enum class U0 { Modes, Random };
    enum class HistoryKind { ConstantPast, Zero, TrajectoryFile };

    U0 u0 = U0::Random;
    std::vector<std::pair<ModeIndex, double>> u0_modes;  // used when u0 == Modes
    double scale = 1.0;                                  // amplitude for random data
    HistoryKind history = HistoryKind::ConstantPast;
    std::string trajectory_file;
};

struct ExperimentOptions {
    int absorb_members = 10;
    double absorb_m1 = 100.0;
    double m2 = 1.0;  // calibration input for the rho2 estimate
    std::vector<std::size_t> tail_cutoffs = {4, 8, 16, 32};
    double tail_epsilon = 0.1;
    std::vector<double> depend_scales = {1e-4, 1e-6, 1e-8};
    double depend_ch = -1.0;  // < 0: fit the constant
    std::vector<double> oracle_dts = {0.512, 0.256, 0.128, 0.064, 0.032, 0.016, 0.008};
    int gronwall_draws = 100;
};

struct FileConfig {
    SimConfig sim;
    InitSpec init;
    ExperimentOptions experiment;
};

/// Parses the declarative key = value config (grammar in the README) and
/// validates every component; throws ConfigError naming the offending key, or
/// the InvalidSpecError of the failed kernel/nonlinearity condition.
FileConfig parse_config(const std::string& path);
FileConfig parse_config_text(const std::string& text);

/// Renders the effective configuration in the same grammar plus the derived
/// constants as comment lines; parse_config(render) reproduces the config.
std::string render_manifest(const FileConfig& cfg);
void write_manifest(const FileConfig& cfg, const std::string& path);

/// Builds (u0, eta0) from the init section. Random data is seeded from
/// sim.seed, band-limited to the lowest third of modes.
std::pair<State, History> initial_data(const FileConfig& cfg);

/// As above with an explicit member stream for ensembles.
State random_band_state(const SimConfig& sim, std::uint64_t member, double scale);

/// Past-trajectory file: one sample per line, time (<= 0) followed by the
/// mode coefficients, whitespace-separated, times ascending.
std::vector<std::pair<double, State>> read_trajectory_file(const std::string& path,
                                                           std::size_t n_modes);

extern const char* const kVersion;

}  // namespace memdiff
