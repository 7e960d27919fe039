#include <doctest.h>

#include <stomo/config.hpp>
#include <stomo/errors.hpp>
#include <stomo/io.hpp>
#include <stomo/metrics.hpp>
#include <stomo/phantom.hpp>
#include <stomo/pipeline.hpp>
#include <stomo/solver.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace stomo;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "stomo_pipeline_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// A small parallel-beam simulation config writing into `dir`.
std::string simulate_json(const fs::path& dir) {
    return std::string(R"({
        "phantom": {"kind": "disks", "dims": [24, 24],
                    "disks": [{"cx": 0.0, "cy": 0.1, "r": 0.5, "value": 1.0},
                              {"cx": -0.4, "cy": -0.3, "r": 0.2, "value": 0.5}]},
        "geometry": {"kind": "parallel2d",
                     "angles": [0.0, 0.7853981633974483, 1.5707963267948966,
                                2.356194490192345, 3.141592653589793,
                                3.9269908169872414, 4.71238898038469,
                                5.497787143782138],
                     "n_p": 32, "detector_spacing": 1.0},
        "noise": {"kind": "gaussian", "rel_std": 0.01, "seed": 5},
        "outputs": {"dir": ")") +
           dir.generic_string() + R"("}})";
}

// A reconstruction config reading `sino`, writing into `dir`.
std::string reconstruct_json(const fs::path& dir, const fs::path& sino,
                             const std::string& solver_extra = "",
                             const std::string& inputs_extra = "") {
    return std::string(R"({
        "inputs": {"sinogram": ")") +
           sino.generic_string() + "\"" + inputs_extra + R"(},
        "grid": {"dims": [24, 24]},
        "solver": {"name": "fblisa", "regularizer": "l1nonneg", "mu": 0.05,
                   "N0": 4, "epochs": 3, "seed": 9)" +
           solver_extra + R"(},
        "outputs": {"dir": ")" +
           dir.generic_string() + R"("}})";
}

} // namespace

TEST_CASE("cmd_simulate writes phantom and sinogram matching direct calls") {
    fs::path dir = fresh_dir("simulate");
    ExperimentConfig cfg = parse_config(simulate_json(dir));
    cmd_simulate(cfg, {});

    REQUIRE(fs::exists(dir / "phantom.stomo"));
    REQUIRE(fs::exists(dir / "sinogram.stomo"));

    ImageGrid phantom = read_image(dir / "phantom.stomo");
    ImageGrid expect_ph = make_phantom(*cfg.phantom);
    REQUIRE(phantom.values.size() == expect_ph.values.size());
    for (std::size_t i = 0; i < phantom.values.size(); ++i)
        CHECK(phantom.values[i] == expect_ph.values[i]);

    Sinogram sino = read_sinogram(dir / "sinogram.stomo");
    Sinogram expect_s = simulate_scan(expect_ph, *cfg.geometry, cfg.noise);
    REQUIRE(sino.values.size() == expect_s.values.size());
    for (std::size_t i = 0; i < sino.values.size(); ++i)
        CHECK(sino.values[i] == expect_s.values[i]);

    // Re-running the same config reproduces both containers byte for byte.
    std::string ph_bytes = slurp(dir / "phantom.stomo");
    std::string s_bytes = slurp(dir / "sinogram.stomo");
    cmd_simulate(cfg, {});
    CHECK(slurp(dir / "phantom.stomo") == ph_bytes);
    CHECK(slurp(dir / "sinogram.stomo") == s_bytes);
}

TEST_CASE("cmd_simulate honors output flags and missing sections are errors") {
    fs::path dir = fresh_dir("simulate_flags");
    ExperimentConfig cfg = parse_config(simulate_json(dir));
    cfg.outputs.write_phantom = false;
    cmd_simulate(cfg, {});
    CHECK_FALSE(fs::exists(dir / "phantom.stomo"));
    CHECK(fs::exists(dir / "sinogram.stomo"));

    ExperimentConfig no_phantom = cfg;
    no_phantom.phantom.reset();
    CHECK_THROWS_AS(cmd_simulate(no_phantom, {}), ConfigError);

    ExperimentConfig no_geom = cfg;
    no_geom.geometry.reset();
    CHECK_THROWS_AS(cmd_simulate(no_geom, {}), ConfigError);
}

TEST_CASE("cmd_simulate overrides replace seed and output directory") {
    fs::path dir = fresh_dir("simulate_ov");
    fs::path redirected = dir / "elsewhere";
    ExperimentConfig cfg = parse_config(simulate_json(dir));

    RunOverrides ov;
    ov.seed = 321;
    ov.out_dir = redirected;
    cmd_simulate(cfg, ov);
    REQUIRE(fs::exists(redirected / "sinogram.stomo"));
    CHECK_FALSE(fs::exists(dir / "sinogram.stomo"));

    // The override must act like setting the noise seed in the config.
    ExperimentConfig seeded = cfg;
    seeded.noise.seed = 321;
    seeded.outputs.dir = dir;
    cmd_simulate(seeded, {});
    CHECK(slurp(redirected / "sinogram.stomo") == slurp(dir / "sinogram.stomo"));
}

TEST_CASE("cmd_reconstruct runs the configured solver and writes artifacts") {
    fs::path dir = fresh_dir("reconstruct");
    ExperimentConfig sim = parse_config(simulate_json(dir));
    cmd_simulate(sim, {});

    fs::path rdir = dir / "recon";
    ExperimentConfig cfg = parse_config(reconstruct_json(rdir, dir / "sinogram.stomo"));
    cmd_reconstruct(cfg, {});

    REQUIRE(fs::exists(rdir / "reconstruction.stomo"));
    REQUIRE(fs::exists(rdir / "trace.csv"));
    CHECK_FALSE(fs::exists(rdir / "metrics.txt")); // no ground truth given

    // The written image must equal a direct solver run on the same inputs.
    Sinogram b = read_sinogram(dir / "sinogram.stomo");
    ImageGrid x0 = ImageGrid::centered(24, 24, 1, 1.0, 1.0, 1.0);
    SolverResult res = run_fblisa(b, x0, make_regularizer(cfg), cfg.solver);
    ImageGrid written = read_image(rdir / "reconstruction.stomo");
    REQUIRE(written.values.size() == res.x_final.values.size());
    for (std::size_t i = 0; i < written.values.size(); ++i)
        CHECK(written.values[i] == res.x_final.values[i]);

    std::string trace_bytes = slurp(rdir / "trace.csv");
    CHECK(trace_bytes.rfind("k,t,batch_size,alpha_accepted,backtracks,", 0) == 0);
    {
        std::ostringstream want;
        write_trace_csv(rdir / "trace_direct.csv", res.trace);
        CHECK(slurp(rdir / "trace_direct.csv") == trace_bytes);
    }
}

TEST_CASE("cmd_reconstruct writes metrics when ground truth is provided") {
    fs::path dir = fresh_dir("reconstruct_metrics");
    ExperimentConfig sim = parse_config(simulate_json(dir));
    cmd_simulate(sim, {});

    fs::path rdir = dir / "recon";
    std::string inputs_extra =
        ", \"ground_truth\": \"" + (dir / "phantom.stomo").generic_string() + "\"";
    ExperimentConfig cfg =
        parse_config(reconstruct_json(rdir, dir / "sinogram.stomo", "", inputs_extra));
    cmd_reconstruct(cfg, {});

    REQUIRE(fs::exists(rdir / "metrics.txt"));
    REQUIRE(fs::exists(rdir / "metrics.csv"));

    ImageGrid recon = read_image(rdir / "reconstruction.stomo");
    ImageGrid gt = read_image(dir / "phantom.stomo");
    MetricsReport expect = compute_metrics(recon, gt);
    MetricsReport got = metrics_from_csv(slurp(rdir / "metrics.csv"));
    CHECK(got.re == expect.re);
    CHECK(got.psnr_db == expect.psnr_db);
    CHECK(got.ssim_val == expect.ssim_val);
}

TEST_CASE("cmd_reconstruct is byte-deterministic and thread-invariant") {
    fs::path dir = fresh_dir("reconstruct_threads");
    ExperimentConfig sim = parse_config(simulate_json(dir));
    cmd_simulate(sim, {});

    fs::path d1 = dir / "r1";
    fs::path d4 = dir / "r4";
    ExperimentConfig c1 = parse_config(reconstruct_json(d1, dir / "sinogram.stomo"));
    cmd_reconstruct(c1, {});

    RunOverrides ov;
    ov.threads = 4;
    ov.out_dir = d4;
    cmd_reconstruct(c1, ov);

    CHECK(slurp(d1 / "reconstruction.stomo") == slurp(d4 / "reconstruction.stomo"));
    CHECK(slurp(d1 / "trace.csv") == slurp(d4 / "trace.csv"));
}

TEST_CASE("cmd_reconstruct aborts loudly on the backtrack cap, artifacts intact") {
    fs::path dir = fresh_dir("reconstruct_abort");
    ExperimentConfig sim = parse_config(simulate_json(dir));
    cmd_simulate(sim, {});

    fs::path rdir = dir / "recon";
    // A huge fixed step with no halvings allowed fails the line search at k=1.
    ExperimentConfig cfg = parse_config(reconstruct_json(
        rdir, dir / "sinogram.stomo", ", \"alpha0\": 1e9, \"max_backtracks\": 0"));
    CHECK_THROWS_AS(cmd_reconstruct(cfg, {}), SolverAbortError);
    CHECK(fs::exists(rdir / "reconstruction.stomo"));
    CHECK(fs::exists(rdir / "trace.csv"));
}

TEST_CASE("cmd_reconstruct requires the sinogram input and the grid section") {
    fs::path dir = fresh_dir("reconstruct_sections");
    ExperimentConfig cfg = parse_config(reconstruct_json(dir, dir / "missing.stomo"));

    ExperimentConfig no_input = cfg;
    no_input.input_sinogram.reset();
    CHECK_THROWS_AS(cmd_reconstruct(no_input, {}), ConfigError);

    ExperimentConfig no_grid = cfg;
    no_grid.grid.reset();
    CHECK_THROWS_AS(cmd_reconstruct(no_grid, {}), ConfigError);

    // Present sections but an unreadable sinogram path is an IO error.
    CHECK_THROWS_AS(cmd_reconstruct(cfg, {}), IoError);
}

TEST_CASE("cmd_evaluate reports the same numbers as compute_metrics") {
    fs::path dir = fresh_dir("evaluate");
    PhantomSpec spec;
    spec.kind = PhantomSpec::Kind::SheppLogan2D;
    spec.dims = {32, 32, 1};
    ImageGrid gt = make_phantom(spec);
    ImageGrid approx = gt;
    for (std::size_t i = 0; i < approx.values.size(); ++i)
        approx.values[i] = 0.9 * approx.values[i] + 0.01;
    write_image(dir / "gt.stomo", gt);
    write_image(dir / "approx.stomo", approx);

    MetricsReport got = cmd_evaluate(dir / "approx.stomo", dir / "gt.stomo", std::nullopt);
    MetricsReport expect = compute_metrics(approx, gt);
    CHECK(got.re == expect.re);
    CHECK(got.psnr_db == expect.psnr_db);
    CHECK(got.ssim_val == expect.ssim_val);

    // Default output directory is the reconstruction's parent.
    REQUIRE(fs::exists(dir / "metrics.csv"));
    MetricsReport round = metrics_from_csv(slurp(dir / "metrics.csv"));
    CHECK(round.re == expect.re);

    // An explicit output directory wins.
    fs::path other = dir / "elsewhere";
    cmd_evaluate(dir / "approx.stomo", dir / "gt.stomo", other);
    CHECK(fs::exists(other / "metrics.txt"));
    CHECK(fs::exists(other / "metrics.csv"));
}
