#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "stomo/config.hpp"
#include "stomo/errors.hpp"
#include "stomo/pipeline.hpp"

namespace {

stomo::RunOverrides make_overrides(const std::optional<std::uint64_t>& seed,
                                   const std::optional<int>& threads,
                                   const std::optional<std::string>& out_dir) {
    stomo::RunOverrides ov;
    ov.seed = seed;
    ov.threads = threads;
    if (out_dir) ov.out_dir = *out_dir;
    return ov;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stomo: sparse nonnegative tomographic reconstruction toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> out_dir;
    std::string recon_path, gt_path;
    int case_id = 0;
    std::string scale = "desk";

    auto add_threads = [&](CLI::App* sub) {
        sub->add_option("--threads", threads, "operator evaluation threads (default 1)")
            ->envname("STOMO_THREADS");
    };

    CLI::App* sim = app.add_subcommand("simulate", "simulate a scan (phantom + sinogram)");
    sim->add_option("--config", config_path, "experiment config, JSON")->required();
    sim->add_option("--seed", seed, "override the config seeds");
    sim->add_option("--out-dir", out_dir, "override the output directory");
    add_threads(sim);

    CLI::App* rec = app.add_subcommand("reconstruct", "run a solver on a sinogram");
    rec->add_option("--config", config_path, "experiment config, JSON")->required();
    rec->add_option("--seed", seed, "override the config seeds");
    rec->add_option("--out-dir", out_dir, "override the output directory");
    add_threads(rec);

    CLI::App* eva = app.add_subcommand("evaluate", "metrics for a reconstruction vs ground truth");
    eva->add_option("reconstruction", recon_path, "reconstructed image container")->required();
    eva->add_option("ground_truth", gt_path, "ground-truth image container")->required();
    eva->add_option("--out-dir", out_dir, "where to write metrics files");

    CLI::App* cas = app.add_subcommand("case", "replay a study case end-to-end");
    cas->add_option("id", case_id, "case id: 1, 2 or 3")->required();
    cas->add_option("--scale", scale, "problem scale")
        ->check(CLI::IsMember({"desk", "small3d"}));
    cas->add_option("--seed", seed, "master seed (noise + sampling)");
    cas->add_option("--out-dir", out_dir, "output directory (default: out)");
    add_threads(cas);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help/version exit clean; usage problems are config errors
    }

    try {
        if (*sim) {
            stomo::cmd_simulate(stomo::parse_config_file(config_path),
                         make_overrides(seed, threads, out_dir));
        } else if (*rec) {
            stomo::cmd_reconstruct(stomo::parse_config_file(config_path),
                            make_overrides(seed, threads, out_dir));
        } else if (*eva) {
            std::optional<std::filesystem::path> dir;
            if (out_dir) dir = *out_dir;
            stomo::cmd_evaluate(recon_path, gt_path, dir);
        } else if (*cas) {
            stomo::run_case(case_id, scale, seed.value_or(0), threads.value_or(1),
                     out_dir.value_or("out"));
        }
        return 0;
    } catch (const stomo::SolverAbortError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const stomo::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const stomo::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const stomo::ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
