#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "stomo/rng.hpp"
#include "stomo/types.hpp"

namespace stomo {

// One additive disk for the Disks phantom, in normalized coordinates
// (the grid spans [-1, 1] on each axis).
struct DiskSpec {
    double cx = 0.0, cy = 0.0;
    double r = 0.5;
    double value = 1.0;
};

// Synthetic ground-truth description. SheppLogan2D/3D are the standard
// head-phantom ellipse/ellipsoid tables with modified (low-contrast)
// intensities so values stay in [0, 1]; Disks sums user-given disks.
// Values are clipped below at 0 in all cases.
struct PhantomSpec {
    enum class Kind { SheppLogan2D, SheppLogan3D, Disks };

    Kind kind = Kind::SheppLogan2D;
    std::array<int, 3> dims{128, 128, 1};          // nz must be 1 for 2D kinds
    std::array<double, 3> voxel_size{1.0, 1.0, 1.0};
    std::vector<DiskSpec> disks;                   // Disks only

    void validate() const;  // SheppLogan kinds need >= 16 voxels per active axis
};

// Rasterizes the phantom onto a centered grid, evaluating at voxel centers.
ImageGrid make_phantom(const PhantomSpec& spec);

// n equispaced angles i * arc / n, i = 0..n-1. arc defaults to a full
// rotation (2*pi), matching the scan protocols this library reproduces;
// pass pi for a half-rotation parallel-beam sweep.
std::vector<double> make_angles(int n, double arc = 6.28318530717958647692);

struct NoiseSpec {
    enum class Kind { None, Gaussian };

    Kind kind = Kind::None;
    double rel_std = 0.0;     // sigma = rel_std * max|clean data|
    std::uint64_t seed = 0;

    void validate() const;
};

// Forward-projects the phantom over the full geometry and adds i.i.d.
// Gaussian noise of the requested relative level to every sample.
Sinogram simulate_scan(const ImageGrid& phantom, const ScanGeometry& geom,
                       const NoiseSpec& noise, int threads = 1);

} // namespace stomo
