#include "stomo/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "stomo/projector.hpp"
#include "stomo/vec.hpp"

namespace stomo {
namespace {

long long ceil_div(long long a, long long b) { return (a + b - 1) / b; }

int effective_n_max(const SolverConfig& cfg, int n_theta) {
    return cfg.n_max == 0 ? n_theta : cfg.n_max;
}

double effective_c(const SolverConfig& cfg, int n_theta) {
    if (cfg.schedule_c > 0.0) return cfg.schedule_c;
    return cfg.n0 * std::pow(cfg.eps_ratio, static_cast<double>(ceil_div(n_theta, cfg.n0)));
}

double gradient_map_norm(const std::vector<double>& x, const std::vector<double>& cand,
                         double alpha) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double d = x[i] - cand[i];
        s += d * d;
    }
    return std::sqrt(s) / alpha;
}

} // namespace

void SolverConfig::validate(int n_theta) const {
    auto bad = [](const std::string& msg) { throw ConfigError("solver config: " + msg); };
    if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) bad("alpha0 must be positive and finite");
    if (!(beta > 0.0 && beta < 1.0)) bad("beta must lie in (0, 1)");
    if (n0 < 1) bad("N0 must be positive");
    int nm = effective_n_max(*this, n_theta);
    if (nm < n0) bad("n_max must be >= N0");
    if (nm > n_theta) bad("n_max must be <= the number of views");
    if (n0 > n_theta) bad("N0 must be <= the number of views");
    if (schedule_c < 0.0 || !std::isfinite(schedule_c)) bad("C must be >= 0 (0 = auto)");
    if (!(eps_ratio > 0.0 && eps_ratio < 1.0)) bad("eps_ratio must lie in (0, 1)");
    if (!(mu >= 0.0) || !std::isfinite(mu)) bad("mu must be >= 0");
    if (epochs < 1) bad("epochs must be positive");
    if (time_budget && !(*time_budget > 0.0)) bad("time_budget must be positive");
    if (max_backtracks < 0) bad("max_backtracks must be >= 0");
    if (alpha_max && (!(*alpha_max > 0.0) || !std::isfinite(*alpha_max)))
        bad("alpha_max must be positive and finite");
    if (lipschitz_estimate && !(*lipschitz_estimate > 0.0))
        bad("lipschitz_estimate must be positive");
    if (threads < 1) bad("threads must be >= 1");
}

int batch_schedule(int t, int n_prev, long long k_hat, int n_theta, const SolverConfig& cfg) {
    if (t < 1) throw ArgumentError("batch_schedule: epoch index must be >= 1");
    if (n_prev < 1 || n_prev > n_theta)
        throw ArgumentError("batch_schedule: previous batch size out of range");
    if (k_hat < 0) throw ArgumentError("batch_schedule: k_hat must be >= 0");
    double c = effective_c(cfg, n_theta);
    int n_max = effective_n_max(cfg, n_theta);
    double idx = static_cast<double>(k_hat + ceil_div(n_theta, n_prev));
    double eps = std::pow(cfg.eps_ratio, idx);
    double want = eps > 0.0 ? std::ceil(c / eps) : std::numeric_limits<double>::infinity();
    double floored = std::max(want, static_cast<double>(cfg.n0));
    return static_cast<int>(std::min(floored, static_cast<double>(n_max)));
}

AngleSubset sample_minibatch(Rng& rng, int n_theta, int size) {
    return AngleSubset::of(rng.sample_without_replacement(n_theta, size), n_theta);
}

LineSearchOutcome line_search(const std::vector<double>& x, double f_x,
                              const std::vector<double>& grad,
                              const std::function<double(const std::vector<double>&)>& value_fn,
                              const Regularizer& reg, double alpha_init, double beta,
                              int max_backtracks) {
    if (x.size() != grad.size()) throw ArgumentError("line_search: x/grad size mismatch");
    if (!(alpha_init > 0.0) || !std::isfinite(alpha_init))
        throw ArgumentError("line_search: alpha_init must be positive and finite");
    if (!(beta > 0.0 && beta < 1.0)) throw ArgumentError("line_search: beta must lie in (0, 1)");

    LineSearchOutcome out;
    out.alpha = alpha_init;
    std::vector<double> cand(x.size());
    for (int j = 0; j <= max_backtracks; ++j) {
        for (std::size_t i = 0; i < x.size(); ++i) cand[i] = x[i] - out.alpha * grad[i];
        prox_inplace(reg, cand, out.alpha);

        double inner = 0.0, sq = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double d = cand[i] - x[i];
            inner += grad[i] * d;
            sq += d * d;
        }
        double bound = f_x + inner + sq / (2.0 * out.alpha);
        if (value_fn(cand) <= bound) {
            out.candidate = std::move(cand);
            out.backtracks = j;
            out.accepted = true;
            return out;
        }
        out.backtracks = j;
        if (j < max_backtracks) out.alpha *= beta;
        else out.candidate = std::move(cand);  // cap hit: report the last trial
    }
    out.accepted = false;
    return out;
}

double full_objective(const ImageGrid& x, const Sinogram& b, const Regularizer& reg,
                      int threads) {
    AngleSubset all = AngleSubset::full(b.geometry.n_theta());
    return subsampled_fidelity_value(x, b, all, threads) + eval(reg, x.values);
}

namespace {

// Shared driver for the stochastic methods. `grow` selects the growing
// schedule; otherwise every epoch uses a constant batch of n0 views.
SolverResult run_stochastic(const Sinogram& b, const ImageGrid& x0, const Regularizer& reg,
                            const SolverConfig& cfg, bool grow,
                            const IterationObserver& observer) {
    b.validate();
    x0.validate();
    reg.validate();
    const int n_theta = b.geometry.n_theta();
    cfg.validate(n_theta);

    const double alpha_start = cfg.alpha_max ? std::min(cfg.alpha0, *cfg.alpha_max) : cfg.alpha0;
    if (cfg.lipschitz_estimate && alpha_start > 1.0 / (2.0 * *cfg.lipschitz_estimate))
        std::fprintf(stderr,
                     "warning: initial step %.3g exceeds 1/(2L) = %.3g; convergence is not "
                     "guaranteed at this step size\n",
                     alpha_start, 1.0 / (2.0 * *cfg.lipschitz_estimate));

    Rng rng(cfg.seed);
    SolverResult res;
    res.x_final = x0;
    ImageGrid& x = res.x_final;
    ImageGrid probe = x0;  // shape carrier for line-search value evaluations

    long long k = 0;          // completed iterations
    long long angle_ops = 0;  // deterministic cost clock, see IterationRecord
    const double unit = 2.0 * n_theta;
    int n_prev = cfg.n0;

    for (int t = 1; t <= cfg.epochs; ++t) {
        const int batch = grow ? batch_schedule(t, n_prev, k, n_theta, cfg) : cfg.n0;
        n_prev = batch;
        const long long iters = ceil_div(n_theta, batch);
        for (long long i = 0; i < iters; ++i) {
            AngleSubset subset = sample_minibatch(rng, n_theta, batch);
            FidelityEval fe = subsampled_fidelity(x, b, subset, cfg.threads);
            angle_ops += 2LL * batch;

            long long probes = 0;
            auto value_fn = [&](const std::vector<double>& v) {
                ++probes;
                probe.values = v;
                return subsampled_fidelity_value(probe, b, subset, cfg.threads);
            };
            LineSearchOutcome ls = line_search(x.values, fe.value, fe.gradient, value_fn, reg,
                                               alpha_start, cfg.beta, cfg.max_backtracks);
            angle_ops += probes * batch;

            IterationRecord rec;
            rec.k = ++k;
            rec.t = t;
            rec.batch_size = batch;
            rec.backtracks = ls.backtracks;
            rec.sub_objective = fe.value;
            rec.grad_map_norm = gradient_map_norm(x.values, ls.candidate, ls.alpha);
            rec.elapsed = static_cast<double>(angle_ops) / unit;
            if (ls.accepted) {
                rec.alpha_accepted = ls.alpha;
                x.values = std::move(ls.candidate);
            }
            if (cfg.record_full_objective)
                rec.full_objective = full_objective(x, b, reg, cfg.threads);
            res.trace.push_back(rec);
            if (observer) observer(res.trace.back(), x, subset);

            if (!ls.accepted) {
                res.termination = Termination::BacktrackCapHit;
                return res;
            }
            if (cfg.time_budget && rec.elapsed >= *cfg.time_budget) {
                res.termination = Termination::TimeBudget;
                return res;
            }
        }
    }
    res.termination = Termination::EpochsExhausted;
    return res;
}

} // namespace

SolverResult run_fblisa(const Sinogram& b, const ImageGrid& x0, const Regularizer& reg,
                        const SolverConfig& cfg, const IterationObserver& observer) {
    return run_stochastic(b, x0, reg, cfg, /*grow=*/true, observer);
}

SolverResult run_proxsgd(const Sinogram& b, const ImageGrid& x0, const Regularizer& reg,
                         const SolverConfig& cfg, const IterationObserver& observer) {
    return run_stochastic(b, x0, reg, cfg, /*grow=*/false, observer);
}

SolverResult run_fb(const Sinogram& b, const ImageGrid& x0, const Regularizer& reg,
                    const SolverConfig& cfg, const IterationObserver& observer) {
    b.validate();
    x0.validate();
    reg.validate();
    const int n_theta = b.geometry.n_theta();
    cfg.validate(n_theta);

    if (cfg.lipschitz_estimate && cfg.alpha0 > 1.0 / (2.0 * *cfg.lipschitz_estimate))
        std::fprintf(stderr,
                     "warning: fixed step %.3g exceeds 1/(2L) = %.3g; convergence is not "
                     "guaranteed at this step size\n",
                     cfg.alpha0, 1.0 / (2.0 * *cfg.lipschitz_estimate));

    SolverResult res;
    res.x_final = x0;
    ImageGrid& x = res.x_final;
    AngleSubset all = AngleSubset::full(n_theta);

    double first_objective = 0.0;
    bool warned_divergence = false;
    std::vector<double> cand(x.values.size());

    for (int k = 1; k <= cfg.epochs; ++k) {
        FidelityEval fe = subsampled_fidelity(x, b, all, cfg.threads);
        if (k == 1) first_objective = fe.value;
        // Fixed-step divergence is allowed (the trace shows it) but worth a
        // single heads-up on the console.
        if (!warned_divergence && k > 1 &&
            (!std::isfinite(fe.value) || fe.value > 10.0 * std::max(first_objective, 1e-300))) {
            std::fprintf(stderr,
                         "warning: fixed-step iteration %d fidelity %.3g exceeds 10x its "
                         "initial value; the method appears to be diverging\n",
                         k, fe.value);
            warned_divergence = true;
        }

        for (std::size_t i = 0; i < cand.size(); ++i)
            cand[i] = x.values[i] - cfg.alpha0 * fe.gradient[i];
        prox_inplace(reg, cand, cfg.alpha0);

        IterationRecord rec;
        rec.k = k;
        rec.t = k;
        rec.batch_size = n_theta;
        rec.alpha_accepted = cfg.alpha0;
        rec.backtracks = 0;
        rec.sub_objective = fe.value;
        rec.grad_map_norm = gradient_map_norm(x.values, cand, cfg.alpha0);
        rec.elapsed = static_cast<double>(k);  // one full sweep per iteration
        std::swap(x.values, cand);
        if (cfg.record_full_objective)
            rec.full_objective = full_objective(x, b, reg, cfg.threads);
        res.trace.push_back(rec);
        if (observer) observer(res.trace.back(), x, all);

        if (cfg.time_budget && rec.elapsed >= *cfg.time_budget) {
            res.termination = Termination::TimeBudget;
            return res;
        }
    }
    res.termination = Termination::EpochsExhausted;
    return res;
}

} // namespace stomo
