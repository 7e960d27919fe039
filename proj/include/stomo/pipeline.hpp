#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stomo/config.hpp"
#include "stomo/metrics.hpp"
#include "stomo/solver.hpp"
#include "stomo/types.hpp"

namespace stomo {

// Command-line overrides applied on top of a parsed config.
struct RunOverrides {
    std::optional<std::uint64_t> seed;   // replaces solver and noise seeds
    std::optional<int> threads;
    std::optional<std::filesystem::path> out_dir;
};

// Simulates a scan: writes the phantom and sinogram containers and prints a
// one-line summary. Needs the phantom and geometry config sections.
void cmd_simulate(const ExperimentConfig& cfg, const RunOverrides& ov);

// Runs the configured solver on the configured input sinogram; writes the
// reconstruction, the trace CSV, and (when inputs.ground_truth is given)
// metrics files. Throws SolverAbortError after writing artifacts when the
// solver stopped on BacktrackCapHit.
void cmd_reconstruct(const ExperimentConfig& cfg, const RunOverrides& ov);

// Reads two image containers and reports metrics to console and files
// (<out>/metrics.txt and <out>/metrics.csv).
MetricsReport cmd_evaluate(const std::filesystem::path& recon_path,
                           const std::filesystem::path& gt_path,
                           const std::optional<std::filesystem::path>& out_dir);

// One comparison-table row: a method evaluated at one checkpoint.
struct CaseTableRow {
    std::string method;
    double checkpoint_s = 0.0;  // cost-model seconds at the snapshot
    MetricsReport metrics;
};

// Everything one solver contributed to a case run.
struct CaseMethodRun {
    std::string method;
    SolverResult result;
    std::vector<std::pair<double, double>> re_vs_time;  // (elapsed_s, re) per iteration
    std::map<int, double> re_at_epoch;                  // relative error after each epoch
};

struct CaseResult {
    ImageGrid ground_truth;
    std::vector<CaseTableRow> table;
    std::vector<CaseMethodRun> methods;
};

// Replays one of the three study cases end-to-end at the requested scale:
// simulate, run all three solvers on the same data with an equal epoch
// budget, snapshot at the checkpoint epochs, and write the comparison table
// (method,checkpoint_s,re,psnr_db,ssim), the relative-error-vs-time CSV
// (method,elapsed_s,re), reconstructions, traces, phantom and sinogram
// under out_dir.
//
// Cases: 1 = 36 views, no noise, mu = 2; 2 = 36 views, 2% Gaussian noise,
// mu = 1; 3 = 72 views, 2% noise, mu = 1. Scales: "desk" = 128^2 phantom
// with a 192-cell parallel-beam detector; "small3d" = 48^3 phantom with a
// 96x96 cone-beam panel.
CaseResult run_case(int case_id, const std::string& scale, std::uint64_t seed, int threads,
                    const std::filesystem::path& out_dir);

} // namespace stomo
