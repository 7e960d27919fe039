#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "stomo/regularizer.hpp"
#include "stomo/rng.hpp"
#include "stomo/types.hpp"

namespace stomo {

// Configuration shared by the reconstruction solvers. Fields that only
// matter for the stochastic methods (batch schedule, line search) are
// ignored by the deterministic fixed-step baseline where noted.
struct SolverConfig {
    double alpha0 = 1e-3;    // initial trial step; also the reset value after
                             // every accepted iteration (fixed step for fb)
    double beta = 0.5;       // backtracking shrink factor, in (0, 1)
    int n0 = 8;              // initial mini-batch size, in views
    int n_max = 0;           // batch-size cap; 0 means "all views"
    double schedule_c = 0.0; // growth constant C; 0 resolves automatically to
                             // n0 * eps_ratio^ceil(n_theta/n0), which makes the
                             // first epoch use exactly n0 views
    double eps_ratio = 0.99; // epsilon_k = eps_ratio^k (summable, in (0, 1))
    double mu = 0.0;         // regularization weight used when building the
                             // regularizer from a config file; the run
                             // functions honor their explicit `reg` argument
    int epochs = 10;         // stochastic: passes over the data; fb: iterations
    std::optional<double> time_budget;  // cost-model seconds (see below)
    int max_backtracks = 60; // line-search halvings allowed per iteration
    std::uint64_t seed = 0;  // mini-batch sampling stream
    std::optional<double> alpha_max;    // optional cap on trial steps; the
                                        // reset rule makes alpha0 the
                                        // effective cap when unset
    bool record_full_objective = false; // telemetry: log the full objective
                                        // each iteration (not charged to the
                                        // cost clock)
    std::optional<double> lipschitz_estimate;  // when set, warns (once, to
                                               // stderr) if alpha0 > 1/(2L)
    int threads = 1;         // operator evaluation width; never affects results

    // Throws ConfigError unless all fields are consistent for a scan with
    // n_theta views (0 < n0 <= n_max <= n_theta, beta in (0,1), ...).
    void validate(int n_theta) const;
};

// One row of the convergence trace.
//
// `elapsed` is a deterministic cost-model clock, not wall time: 1.0 second
// equals one full forward+adjoint sweep over all n_theta views, i.e. a
// single view's forward (or adjoint) application costs 1/(2*n_theta). A
// stochastic iteration with batch N and j backtracks charges
// (2 + 1 + j) * N / (2*n_theta): one fidelity value+gradient plus 1+j
// line-search value probes. A fixed-step full-batch iteration charges 1.0.
// The same unit is used for SolverConfig::time_budget and for checkpoint
// times, making every timing artifact reproducible bit-for-bit.
struct IterationRecord {
    long long k = 0;             // global iteration index, 1-based
    int t = 0;                   // epoch index, 1-based
    int batch_size = 0;          // views in this iteration's mini-batch
    double alpha_accepted = 0.0; // accepted step; 0.0 on a rejected terminal row
    int backtracks = 0;          // halvings before acceptance (or the cap)
    double sub_objective = 0.0;  // mini-batch fidelity at the pre-step iterate
    std::optional<double> full_objective;  // telemetry, post-step iterate
    double grad_map_norm = 0.0;  // ||x - candidate|| / alpha of this step
    double elapsed = 0.0;        // cost-model seconds at the end of the step
};

enum class Termination { EpochsExhausted, TimeBudget, BacktrackCapHit };

struct SolverResult {
    ImageGrid x_final;
    std::vector<IterationRecord> trace;
    Termination termination = Termination::EpochsExhausted;
};

// Called after each iteration with the appended record, the current iterate,
// and the mini-batch used. Intended for diagnostics and experiment capture;
// observers must not mutate solver state.
using IterationObserver =
    std::function<void(const IterationRecord&, const ImageGrid&, const AngleSubset&)>;

// Mini-batch size for epoch t (1-based), given the previous epoch's size and
// the number of completed iterations k_hat:
//   N_t = min(n_max, max(ceil(C / eps_ratio^(k_hat + ceil(n_theta/n_prev))), n0)).
// cfg.schedule_c == 0 resolves C automatically as documented on SolverConfig.
int batch_schedule(int t, int n_prev, long long k_hat, int n_theta, const SolverConfig& cfg);

// Draws `size` distinct view indices uniformly, returned in canonical
// (ascending) order.
AngleSubset sample_minibatch(Rng& rng, int n_theta, int size);

struct LineSearchOutcome {
    std::vector<double> candidate;  // prox-gradient point for the final alpha
    double alpha = 0.0;             // step of the final trial
    int backtracks = 0;             // halvings performed
    bool accepted = false;          // sufficient-decrease test passed
};

// Backtracking proximal-gradient line search. Starting from alpha_init,
// candidates prox_{alpha R}(x - alpha grad) are tried against the quadratic
// upper-bound test (non-strict)
//   f(cand) <= f_x + <grad, cand - x> + ||cand - x||^2 / (2 alpha),
// shrinking alpha by beta on each failure, for at most max_backtracks
// halvings. value_fn must evaluate the same sub-sampled fidelity that
// produced (f_x, grad).
LineSearchOutcome line_search(const std::vector<double>& x, double f_x,
                              const std::vector<double>& grad,
                              const std::function<double(const std::vector<double>&)>& value_fn,
                              const Regularizer& reg, double alpha_init, double beta,
                              int max_backtracks);

// Full objective (1/2)||A x - b||^2 + R(x).
double full_objective(const ImageGrid& x, const Sinogram& b, const Regularizer& reg,
                      int threads = 1);

// Stochastic proximal-gradient solver with backtracking line search and the
// growing mini-batch schedule above. (seed, config, inputs) fully determine
// the result, including the trace, at any thread count.
SolverResult run_fblisa(const Sinogram& b, const ImageGrid& x0, const Regularizer& reg,
                        const SolverConfig& cfg, const IterationObserver& observer = {});

// Same loop with a constant mini-batch of n0 views (no growth).
SolverResult run_proxsgd(const Sinogram& b, const ImageGrid& x0, const Regularizer& reg,
                         const SolverConfig& cfg, const IterationObserver& observer = {});

// Deterministic full-batch proximal-gradient baseline with a fixed step
// alpha0 and no line search. Warns once on stderr if the fidelity starts
// growing (fixed-step divergence), but keeps iterating.
SolverResult run_fb(const Sinogram& b, const ImageGrid& x0, const Regularizer& reg,
                    const SolverConfig& cfg, const IterationObserver& observer = {});

} // namespace stomo
