#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "stomo/errors.hpp"

namespace stomo {

// Regular voxel grid with world placement. Values are row-major with x
// fastest: linear index = ix + nx*(iy + ny*iz). 2D images use nz == 1.
// `origin` is the world position of the low corner of voxel (0,0,0);
// `centered` builders place the grid symmetrically around the world origin,
// which is also the scan rotation center.
struct ImageGrid {
    std::array<int, 3> dims{1, 1, 1};             // nx, ny, nz
    std::array<double, 3> voxel_size{1.0, 1.0, 1.0};
    std::array<double, 3> origin{0.0, 0.0, 0.0};  // low corner, world units
    std::vector<double> values;

    std::size_t size() const {
        return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) *
               static_cast<std::size_t>(dims[2]);
    }

    bool same_shape(const ImageGrid& other) const {
        return dims == other.dims && voxel_size == other.voxel_size && origin == other.origin;
    }

    // Throws ArgumentError unless dims are positive, voxel sizes positive,
    // and values.size() matches dims.
    void validate() const;

    // Grid of zeros centered on the world origin.
    static ImageGrid centered(int nx, int ny, int nz, double hx = 1.0, double hy = 1.0,
                              double hz = 1.0);
};

// Scan geometry: the set of rays is fully determined by this description.
//
// Parallel2D: for angle theta, rays travel along (-sin t, cos t) and the
// detector cell j sits at signed offset s_j = (j - (n_p-1)/2) * spacing
// along (cos t, sin t). The rotation center is the world origin.
//
// ConeBeam3D: circular orbit in the z = 0 plane. For angle theta the point
// source sits at source_distance * (cos t, sin t, 0) and the flat detector
// panel is centered at -detector_distance * (cos t, sin t, 0), spanned by
// in-plane axis u = (-sin t, cos t, 0) and vertical axis v = (0, 0, 1).
// Panel cells are indexed row-major (cell = row * detector_cols + col) and
// n_p == detector_rows * detector_cols.
struct ScanGeometry {
    enum class Kind { Parallel2D, ConeBeam3D };

    Kind kind = Kind::Parallel2D;
    std::vector<double> angles;      // radians, strictly increasing in [0, 2*pi)
    int n_p = 0;                     // detector cells per view
    double detector_spacing = 1.0;   // cell pitch, world units
    int detector_rows = 1;           // ConeBeam3D panel extents; rows*cols == n_p
    int detector_cols = 0;
    double source_distance = 0.0;    // ConeBeam3D: rotation center -> source
    double detector_distance = 0.0;  // ConeBeam3D: rotation center -> panel center

    int n_theta() const { return static_cast<int>(angles.size()); }
    std::size_t n() const { return static_cast<std::size_t>(n_theta()) * n_p; }

    void validate() const;

    static ScanGeometry parallel2d(std::vector<double> angles, int n_p, double spacing);
    static ScanGeometry conebeam3d(std::vector<double> angles, int rows, int cols,
                                   double spacing, double source_distance,
                                   double detector_distance);
};

// Measured (or simulated) projection data for a geometry. Values are laid
// out view-major: sample (i, j) = angle i, detector cell j lives at
// index i * n_p + j.
struct Sinogram {
    ScanGeometry geometry;
    std::vector<double> values;

    void validate() const;
};

// A subset of view indices. Always canonicalized to strictly increasing
// order so that operator evaluations over a subset have a fixed, seed- and
// history-independent floating-point summation order.
struct AngleSubset {
    std::vector<int> indices;

    int count() const { return static_cast<int>(indices.size()); }

    // Sorts and validates: nonempty, unique, all within [0, n_theta).
    static AngleSubset of(std::vector<int> idx, int n_theta);
    static AngleSubset full(int n_theta);
};

} // namespace stomo
