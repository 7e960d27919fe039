#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "stomo/phantom.hpp"
#include "stomo/regularizer.hpp"
#include "stomo/solver.hpp"
#include "stomo/types.hpp"

namespace stomo {

// Reconstruction grid requested in a config file.
struct GridSpec {
    std::array<int, 3> dims{0, 0, 0};
    std::array<double, 3> voxel_size{1.0, 1.0, 1.0};
};

struct OutputSpec {
    std::filesystem::path dir = "out";
    bool write_phantom = true;
    bool write_sinogram = true;
    bool write_reconstruction = true;
    bool write_trace = true;
};

// Parsed experiment description. Sections are optional at parse time; each
// command validates that the sections it needs are present.
struct ExperimentConfig {
    std::optional<PhantomSpec> phantom;
    std::optional<ScanGeometry> geometry;
    NoiseSpec noise;

    std::string solver_name = "fblisa";  // fblisa | fb | proxsgd
    SolverConfig solver;
    Regularizer::Kind reg_kind = Regularizer::Kind::L1NonNeg;

    OutputSpec outputs;
    std::vector<double> checkpoints;  // cost-model seconds; empty = default

    std::optional<std::filesystem::path> input_sinogram;      // inputs.sinogram
    std::optional<std::filesystem::path> input_ground_truth;  // inputs.ground_truth
    std::optional<GridSpec> grid;
};

// Parses a JSON experiment description. Unknown keys anywhere, malformed
// values, and out-of-range settings are hard ConfigErrors. `where` prefixes
// error messages (usually the file name).
ExperimentConfig parse_config(const std::string& text, const std::string& where = "config");

// Same, reading from a file (IoError if unreadable).
ExperimentConfig parse_config_file(const std::filesystem::path& path);

// Builds the regularizer an experiment asked for (kind + solver mu).
Regularizer make_regularizer(const ExperimentConfig& cfg);

} // namespace stomo
