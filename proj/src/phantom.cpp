#include "stomo/phantom.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "stomo/projector.hpp"
#include "stomo/vec.hpp"

namespace stomo {
namespace {

constexpr double deg = std::numbers::pi / 180.0;

struct Ellipse {  // 2D: intensity, semi-axes, center, rotation
    double a, ax, ay, x0, y0, phi;
};

struct Ellipsoid {  // 3D, rotated about z only
    double a, ax, ay, az, x0, y0, z0, phi;
};

// Standard head-phantom tables with modified (low-contrast) intensities:
// unit-intensity skull, -0.8 brain, two -0.2 side lobes, +0.1 features.
constexpr Ellipse kSheppLogan2D[] = {
    {1.0, 0.6900, 0.9200, 0.0, 0.0, 0.0},
    {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
    {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0 * deg},
    {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0 * deg},
    {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, 0.10, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, -0.10, 0.0},
    {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
    {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
    {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
};

constexpr Ellipsoid kSheppLogan3D[] = {
    {1.0, 0.6900, 0.9200, 0.810, 0.0, 0.0, 0.0, 0.0},
    {-0.8, 0.6624, 0.8740, 0.780, 0.0, -0.0184, 0.0, 0.0},
    {-0.2, 0.1100, 0.3100, 0.220, 0.22, 0.0, 0.0, -18.0 * deg},
    {-0.2, 0.1600, 0.4100, 0.280, -0.22, 0.0, 0.0, 18.0 * deg},
    {0.1, 0.2100, 0.2500, 0.410, 0.0, 0.35, -0.15, 0.0},
    {0.1, 0.0460, 0.0460, 0.050, 0.0, 0.10, 0.25, 0.0},
    {0.1, 0.0460, 0.0460, 0.050, 0.0, -0.10, 0.25, 0.0},
    {0.1, 0.0460, 0.0230, 0.050, -0.08, -0.605, 0.0, 0.0},
    {0.1, 0.0230, 0.0230, 0.020, 0.0, -0.606, 0.0, 0.0},
    {0.1, 0.0230, 0.0460, 0.020, 0.06, -0.605, 0.0, 0.0},
};

} // namespace

void PhantomSpec::validate() const {
    for (int a = 0; a < 3; ++a) {
        if (dims[a] < 1) throw ArgumentError("PhantomSpec: dims must be positive");
        if (!(voxel_size[a] > 0.0)) throw ArgumentError("PhantomSpec: voxel_size must be positive");
    }
    bool needs_2d = kind == Kind::SheppLogan2D || kind == Kind::Disks;
    if (needs_2d && dims[2] != 1)
        throw ArgumentError("PhantomSpec: 2D phantom kinds require nz == 1");
    if (kind == Kind::SheppLogan2D && (dims[0] < 16 || dims[1] < 16))
        throw ArgumentError("PhantomSpec: head phantom needs at least 16 voxels per axis");
    if (kind == Kind::SheppLogan3D && (dims[0] < 16 || dims[1] < 16 || dims[2] < 16))
        throw ArgumentError("PhantomSpec: head phantom needs at least 16 voxels per axis");
    if (kind == Kind::Disks) {
        // An empty disk list is legal and yields the all-zero image.
        for (const auto& d : disks)
            if (!(d.r > 0.0)) throw ArgumentError("PhantomSpec: disk radius must be positive");
    }
}

ImageGrid make_phantom(const PhantomSpec& spec) {
    spec.validate();
    ImageGrid g = ImageGrid::centered(spec.dims[0], spec.dims[1], spec.dims[2],
                                      spec.voxel_size[0], spec.voxel_size[1],
                                      spec.voxel_size[2]);
    // Normalized coordinates: the grid spans [-1, 1] per axis.
    const double sx = 2.0 / (spec.dims[0] * spec.voxel_size[0]);
    const double sy = 2.0 / (spec.dims[1] * spec.voxel_size[1]);
    const double sz = 2.0 / (spec.dims[2] * spec.voxel_size[2]);

    std::size_t idx = 0;
    for (int iz = 0; iz < spec.dims[2]; ++iz) {
        double w = (g.origin[2] + (iz + 0.5) * spec.voxel_size[2]) * sz;
        for (int iy = 0; iy < spec.dims[1]; ++iy) {
            double v = (g.origin[1] + (iy + 0.5) * spec.voxel_size[1]) * sy;
            for (int ix = 0; ix < spec.dims[0]; ++ix, ++idx) {
                double u = (g.origin[0] + (ix + 0.5) * spec.voxel_size[0]) * sx;
                double acc = 0.0;
                switch (spec.kind) {
                    case PhantomSpec::Kind::SheppLogan2D:
                        for (const auto& e : kSheppLogan2D) {
                            double c = std::cos(e.phi), s = std::sin(e.phi);
                            double du = u - e.x0, dv = v - e.y0;
                            double eu = (c * du + s * dv) / e.ax;
                            double ev = (-s * du + c * dv) / e.ay;
                            if (eu * eu + ev * ev <= 1.0) acc += e.a;
                        }
                        break;
                    case PhantomSpec::Kind::SheppLogan3D:
                        for (const auto& e : kSheppLogan3D) {
                            double c = std::cos(e.phi), s = std::sin(e.phi);
                            double du = u - e.x0, dv = v - e.y0, dw = w - e.z0;
                            double eu = (c * du + s * dv) / e.ax;
                            double ev = (-s * du + c * dv) / e.ay;
                            double ew = dw / e.az;
                            if (eu * eu + ev * ev + ew * ew <= 1.0) acc += e.a;
                        }
                        break;
                    case PhantomSpec::Kind::Disks:
                        for (const auto& d : spec.disks) {
                            double du = u - d.cx, dv = v - d.cy;
                            if (du * du + dv * dv <= d.r * d.r) acc += d.value;
                        }
                        break;
                }
                g.values[idx] = std::max(acc, 0.0);
            }
        }
    }
    return g;
}

std::vector<double> make_angles(int n, double arc) {
    if (n < 1) throw ArgumentError("make_angles: n must be positive");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (!(arc > 0.0) || arc > two_pi)
        throw ArgumentError("make_angles: arc must lie in (0, 2*pi]");
    std::vector<double> a(n);
    for (int i = 0; i < n; ++i) a[i] = i * arc / n;
    return a;
}

void NoiseSpec::validate() const {
    if (!(rel_std >= 0.0) || !std::isfinite(rel_std))
        throw ArgumentError("NoiseSpec: rel_std must be >= 0");
}

Sinogram simulate_scan(const ImageGrid& phantom, const ScanGeometry& geom,
                       const NoiseSpec& noise, int threads) {
    noise.validate();
    Sinogram sino;
    sino.geometry = geom;
    sino.values = forward_project(phantom, geom, AngleSubset::full(geom.n_theta()), threads);
    if (noise.kind == NoiseSpec::Kind::Gaussian && noise.rel_std > 0.0) {
        double sigma = noise.rel_std * max_abs(sino.values);
        Rng rng(noise.seed);
        for (double& s : sino.values) s += sigma * rng.next_normal();
    }
    return sino;
}

} // namespace stomo
