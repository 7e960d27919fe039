#include "stomo/pipeline.hpp"

#include <cmath>
#include <iostream>

#include "stomo/io.hpp"
#include "stomo/phantom.hpp"

namespace stomo {
namespace {

ExperimentConfig with_overrides(ExperimentConfig cfg, const RunOverrides& ov) {
    if (ov.seed) {
        cfg.solver.seed = *ov.seed;
        cfg.noise.seed = *ov.seed;
    }
    if (ov.threads) cfg.solver.threads = *ov.threads;
    if (ov.out_dir) cfg.outputs.dir = *ov.out_dir;
    return cfg;
}

SolverResult run_named(const std::string& name, const Sinogram& b, const ImageGrid& x0,
                       const Regularizer& reg, const SolverConfig& scfg,
                       const IterationObserver& obs = {}) {
    if (name == "fblisa") return run_fblisa(b, x0, reg, scfg, obs);
    if (name == "proxsgd") return run_proxsgd(b, x0, reg, scfg, obs);
    if (name == "fb") return run_fb(b, x0, reg, scfg, obs);
    throw ConfigError("unknown solver name '" + name + "'");
}

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::EpochsExhausted: return "epochs_exhausted";
        case Termination::TimeBudget: return "time_budget";
        case Termination::BacktrackCapHit: return "backtrack_cap_hit";
    }
    return "?";
}

struct CasePreset {
    int n_theta;
    bool noisy;
    double mu;
};

CasePreset case_preset(int id) {
    switch (id) {
        case 1: return {36, false, 2.0};
        case 2: return {36, true, 1.0};
        case 3: return {72, true, 1.0};
    }
    throw ArgumentError("case id must be 1, 2 or 3");
}

} // namespace

void cmd_simulate(const ExperimentConfig& raw, const RunOverrides& ov) {
    ExperimentConfig cfg = with_overrides(raw, ov);
    if (!cfg.phantom) throw ConfigError("simulate: config needs a 'phantom' section");
    if (!cfg.geometry) throw ConfigError("simulate: config needs a 'geometry' section");

    ImageGrid phantom = make_phantom(*cfg.phantom);
    Sinogram sino = simulate_scan(phantom, *cfg.geometry, cfg.noise, cfg.solver.threads);

    const auto& dir = cfg.outputs.dir;
    if (cfg.outputs.write_phantom) write_image(dir / "phantom.stomo", phantom);
    if (cfg.outputs.write_sinogram) write_sinogram(dir / "sinogram.stomo", sino);

    bool noisy = cfg.noise.kind == NoiseSpec::Kind::Gaussian && cfg.noise.rel_std > 0.0;
    std::cout << "simulated scan: dims=" << phantom.dims[0] << "x" << phantom.dims[1] << "x"
              << phantom.dims[2] << " n_theta=" << sino.geometry.n_theta()
              << " n_p=" << sino.geometry.n_p << " noise="
              << (noisy ? "gaussian(rel_std=" + fmt_double(cfg.noise.rel_std) + ")" : "none")
              << " seed=" << cfg.noise.seed << " -> " << dir.string() << "\n";
}

void cmd_reconstruct(const ExperimentConfig& raw, const RunOverrides& ov) {
    ExperimentConfig cfg = with_overrides(raw, ov);
    if (!cfg.input_sinogram) throw ConfigError("reconstruct: config needs inputs.sinogram");
    if (!cfg.grid) throw ConfigError("reconstruct: config needs a 'grid' section");

    Sinogram b = read_sinogram(*cfg.input_sinogram);
    ImageGrid x0 =
        ImageGrid::centered(cfg.grid->dims[0], cfg.grid->dims[1], cfg.grid->dims[2],
                            cfg.grid->voxel_size[0], cfg.grid->voxel_size[1],
                            cfg.grid->voxel_size[2]);
    Regularizer reg = make_regularizer(cfg);
    SolverResult res = run_named(cfg.solver_name, b, x0, reg, cfg.solver);

    const auto& dir = cfg.outputs.dir;
    if (cfg.outputs.write_reconstruction)
        write_image(dir / "reconstruction.stomo", res.x_final);
    if (cfg.outputs.write_trace) write_trace_csv(dir / "trace.csv", res.trace);

    if (cfg.input_ground_truth) {
        ImageGrid gt = read_image(*cfg.input_ground_truth);
        MetricsReport m = compute_metrics(res.x_final, gt);
        write_text_file(dir / "metrics.txt", metrics_to_text(m));
        write_text_file(dir / "metrics.csv", metrics_to_csv(m));
        std::cout << metrics_to_text(m);
    }

    std::cout << "reconstruction: solver=" << cfg.solver_name << " iterations="
              << res.trace.size() << " termination=" << termination_name(res.termination)
              << " elapsed_s="
              << fmt_double(res.trace.empty() ? 0.0 : res.trace.back().elapsed) << " -> "
              << dir.string() << "\n";

    if (res.termination == Termination::BacktrackCapHit)
        throw SolverAbortError("solver stopped: line-search backtrack cap hit at iteration " +
                               std::to_string(res.trace.back().k));
}

MetricsReport cmd_evaluate(const std::filesystem::path& recon_path,
                           const std::filesystem::path& gt_path,
                           const std::optional<std::filesystem::path>& out_dir) {
    ImageGrid recon = read_image(recon_path);
    ImageGrid gt = read_image(gt_path);
    MetricsReport m = compute_metrics(recon, gt);
    std::filesystem::path dir = out_dir ? *out_dir : recon_path.parent_path();
    write_text_file(dir / "metrics.txt", metrics_to_text(m));
    write_text_file(dir / "metrics.csv", metrics_to_csv(m));
    std::cout << metrics_to_text(m) << metrics_to_csv(m);
    return m;
}

CaseResult run_case(int case_id, const std::string& scale, std::uint64_t seed, int threads,
                    const std::filesystem::path& out_dir) {
    CasePreset preset = case_preset(case_id);

    PhantomSpec pspec;
    ScanGeometry geom;
    if (scale == "desk") {
        pspec.kind = PhantomSpec::Kind::SheppLogan2D;
        pspec.dims = {128, 128, 1};
        geom = ScanGeometry::parallel2d(make_angles(preset.n_theta), 192, 1.0);
    } else if (scale == "small3d") {
        pspec.kind = PhantomSpec::Kind::SheppLogan3D;
        pspec.dims = {48, 48, 48};
        geom = ScanGeometry::conebeam3d(make_angles(preset.n_theta),
                                        96, 96, 2.0, 96.0, 96.0);
    } else {
        throw ArgumentError("scale must be 'desk' or 'small3d'");
    }

    NoiseSpec noise;
    if (preset.noisy) {
        noise.kind = NoiseSpec::Kind::Gaussian;
        noise.rel_std = 0.02;
        noise.seed = seed;
    }

    CaseResult out;
    out.ground_truth = make_phantom(pspec);
    const ImageGrid& gt = out.ground_truth;
    Sinogram sino = simulate_scan(gt, geom, noise, threads);
    write_image(out_dir / "ground_truth.stomo", gt);
    write_sinogram(out_dir / "sinogram.stomo", sino);

    constexpr int kEpochs = 15;
    const int targets[3] = {(kEpochs + 2) / 3, (2 * kEpochs + 2) / 3, kEpochs};

    for (const std::string method : {"fblisa", "fb", "proxsgd"}) {
        SolverConfig scfg;
        scfg.alpha0 = method == "fb" ? 1e-5 : 1e-3;
        scfg.n0 = 8;
        scfg.epochs = kEpochs;
        scfg.mu = preset.mu;
        scfg.seed = seed;
        scfg.threads = threads;
        Regularizer reg{Regularizer::Kind::L1NonNeg, preset.mu};
        ImageGrid x0 = ImageGrid::centered(gt.dims[0], gt.dims[1], gt.dims[2],
                                           gt.voxel_size[0], gt.voxel_size[1],
                                           gt.voxel_size[2]);

        CaseMethodRun run;
        run.method = method;
        std::map<int, std::pair<double, ImageGrid>> snaps;  // epoch -> (elapsed, iterate)
        auto observer = [&](const IterationRecord& rec, const ImageGrid& x, const AngleSubset&) {
            double re = relative_error(x, gt);
            run.re_vs_time.emplace_back(rec.elapsed, re);
            run.re_at_epoch[rec.t] = re;
            for (int tgt : targets)
                if (rec.t == tgt) snaps[tgt] = {rec.elapsed, x};  // keeps the epoch's last
        };
        run.result = run_named(method, sino, x0, reg, scfg, observer);

        write_image(out_dir / (method + "_reconstruction.stomo"), run.result.x_final);
        write_trace_csv(out_dir / (method + "_trace.csv"), run.result.trace);
        if (run.result.termination == Termination::BacktrackCapHit)
            std::cerr << "warning: " << method
                      << " stopped early (line-search backtrack cap); its table rows cover "
                         "only the epochs it reached\n";

        for (int tgt : targets) {
            auto it = snaps.find(tgt);
            if (it == snaps.end()) continue;
            CaseTableRow row;
            row.method = method;
            row.checkpoint_s = it->second.first;
            row.metrics = compute_metrics(it->second.second, gt);
            out.table.push_back(std::move(row));
        }
        out.methods.push_back(std::move(run));
    }

    std::string tbl = "method,checkpoint_s,re,psnr_db,ssim\n";
    for (const auto& r : out.table)
        tbl += r.method + "," + fmt_double(r.checkpoint_s) + "," + fmt_double(r.metrics.re) +
               "," + fmt_double(r.metrics.psnr_db) + "," + fmt_double(r.metrics.ssim_val) + "\n";
    write_text_file(out_dir / "table.csv", tbl);

    std::string fig = "method,elapsed_s,re\n";
    for (const auto& m : out.methods)
        for (const auto& [elapsed, re] : m.re_vs_time)
            fig += m.method + "," + fmt_double(elapsed) + "," + fmt_double(re) + "\n";
    write_text_file(out_dir / "re_vs_time.csv", fig);

    std::cout << tbl;
    std::cout << "case " << case_id << " (" << scale << ", seed " << seed << ") -> "
              << out_dir.string() << "\n";
    return out;
}

} // namespace stomo
