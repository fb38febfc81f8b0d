#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "memdiff/config.hpp"

namespace memdiff {

struct ExperimentReport {
    std::string scenario;
    bool pass = false;
    nlohmann::json details;
    std::vector<std::string> files;
    nlohmann::json to_json() const;
};

/// Ensemble width: hardware concurrency capped by MEMDIFF_THREADS.
int ensemble_thread_cap();

/// Lemma-style absorbing-ball experiment: n seeded members with E1(0) <= M1
/// must enter {E1 <= rho1^2} no later than twice the predicted entry time and
/// never leave; the V2 ball is checked against rho2^2 built from the fitted
/// m2 constant. Members run in parallel, aggregation is by index.
ExperimentReport run_absorbing(const FileConfig& cfg, int n_members, double M1,
                               const std::string& out_dir);
ExperimentReport run_absorbing(const FileConfig& cfg, const std::string& out_dir);

/// Condition-(C) surrogate: sup-over-time tail energy after the measured
/// transient, per cutoff; asserts monotonicity in the cutoff and a log-log
/// slope <= -0.9 against lambda_{m+1}.
ExperimentReport run_tail(const FileConfig& cfg, const std::vector<std::size_t>& cutoffs,
                          const std::string& out_dir);
ExperimentReport run_tail(const FileConfig& cfg, const std::string& out_dir);

/// Continuous-dependence experiment over perturbation scales: fitted growth
/// constants agree within a factor 2 and final separation scales linearly
/// with the initial one.
ExperimentReport run_dependence(const FileConfig& cfg, const std::vector<double>& scales,
                                const std::string& out_dir);
ExperimentReport run_dependence(const FileConfig& cfg, const std::string& out_dir);

/// Linear single-mode validation against the closed-form auxiliary system,
/// including the dt-refinement convergence table.
ExperimentReport run_oracle(const FileConfig& cfg, const std::string& out_dir);

/// Synthetic check of the uniform Gronwall bound: densely integrated
/// Phi' + Phi = r1 + r2 sqrt(Phi) stays below the bound for random draws.
ExperimentReport run_gronwall(int draws, std::uint64_t seed, const std::string& out_dir);

void write_report(const ExperimentReport& report, const std::string& out_dir);

}  // namespace memdiff
