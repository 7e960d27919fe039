#include "stomo/types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace stomo {

void ImageGrid::validate() const {
    for (int a = 0; a < 3; ++a) {
        if (dims[a] < 1)
            throw ArgumentError("ImageGrid: dims must be positive, got " +
                                std::to_string(dims[a]) + " on axis " + std::to_string(a));
        if (!(voxel_size[a] > 0.0) || !std::isfinite(voxel_size[a]))
            throw ArgumentError("ImageGrid: voxel_size must be positive and finite");
        if (!std::isfinite(origin[a])) throw ArgumentError("ImageGrid: origin must be finite");
    }
    if (values.size() != size())
        throw ArgumentError("ImageGrid: values has " + std::to_string(values.size()) +
                            " entries, dims imply " + std::to_string(size()));
}

ImageGrid ImageGrid::centered(int nx, int ny, int nz, double hx, double hy, double hz) {
    ImageGrid g;
    g.dims = {nx, ny, nz};
    g.voxel_size = {hx, hy, hz};
    g.origin = {-0.5 * nx * hx, -0.5 * ny * hy, -0.5 * nz * hz};
    g.values.assign(g.size(), 0.0);
    g.validate();
    return g;
}

void ScanGeometry::validate() const {
    if (angles.empty()) throw ArgumentError("ScanGeometry: needs at least one angle");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        double a = angles[i];
        if (!std::isfinite(a) || a < 0.0 || a >= two_pi)
            throw ArgumentError("ScanGeometry: angles must lie in [0, 2*pi), got " +
                                std::to_string(a));
        if (i > 0 && !(angles[i - 1] < a))
            throw ArgumentError("ScanGeometry: angles must be strictly increasing");
    }
    if (n_p < 1) throw ArgumentError("ScanGeometry: n_p must be positive");
    if (!(detector_spacing > 0.0) || !std::isfinite(detector_spacing))
        throw ArgumentError("ScanGeometry: detector_spacing must be positive");
    if (kind == Kind::ConeBeam3D) {
        if (detector_rows < 1 || detector_cols < 1)
            throw ArgumentError("ScanGeometry: cone-beam panel extents must be positive");
        if (static_cast<long long>(detector_rows) * detector_cols != n_p)
            throw ArgumentError("ScanGeometry: n_p must equal detector_rows * detector_cols");
        if (!(source_distance > 0.0) || !(detector_distance > 0.0))
            throw ArgumentError("ScanGeometry: cone-beam distances must be positive");
    }
}

ScanGeometry ScanGeometry::parallel2d(std::vector<double> angles, int n_p, double spacing) {
    ScanGeometry g;
    g.kind = Kind::Parallel2D;
    g.angles = std::move(angles);
    g.n_p = n_p;
    g.detector_spacing = spacing;
    g.detector_rows = 1;
    g.detector_cols = n_p;
    g.validate();
    return g;
}

ScanGeometry ScanGeometry::conebeam3d(std::vector<double> angles, int rows, int cols,
                                      double spacing, double source_distance,
                                      double detector_distance) {
    ScanGeometry g;
    g.kind = Kind::ConeBeam3D;
    g.angles = std::move(angles);
    g.detector_rows = rows;
    g.detector_cols = cols;
    g.n_p = rows * cols;
    g.detector_spacing = spacing;
    g.source_distance = source_distance;
    g.detector_distance = detector_distance;
    g.validate();
    return g;
}

void Sinogram::validate() const {
    geometry.validate();
    if (values.size() != geometry.n())
        throw ArgumentError("Sinogram: values has " + std::to_string(values.size()) +
                            " entries, geometry implies " + std::to_string(geometry.n()));
}

AngleSubset AngleSubset::of(std::vector<int> idx, int n_theta) {
    if (idx.empty()) throw ArgumentError("AngleSubset: empty subset");
    std::sort(idx.begin(), idx.end());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] < 0 || idx[i] >= n_theta)
            throw ArgumentError("AngleSubset: index " + std::to_string(idx[i]) +
                                " outside [0, " + std::to_string(n_theta) + ")");
        if (i > 0 && idx[i] == idx[i - 1])
            throw ArgumentError("AngleSubset: duplicate index " + std::to_string(idx[i]));
    }
    AngleSubset s;
    s.indices = std::move(idx);
    return s;
}

AngleSubset AngleSubset::full(int n_theta) {
    if (n_theta < 1) throw ArgumentError("AngleSubset: n_theta must be positive");
    AngleSubset s;
    s.indices.resize(n_theta);
    for (int i = 0; i < n_theta; ++i) s.indices[i] = i;
    return s;
}

} // namespace stomo
