#include "stomo/projector.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "stomo/parallel.hpp"
#include "stomo/vec.hpp"

namespace stomo {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Direction components smaller than this are treated as exactly in-plane.
constexpr double kParallelEps = 1e-14;

// A ray is the line p + t * d, d unit length; t unrestricted in sign.
struct Ray {
    std::array<double, 3> p;
    std::array<double, 3> d;
};

// Grid box in world coordinates.
struct GridFrame {
    std::array<int, 3> dims;
    std::array<double, 3> h, lo, hi;

    explicit GridFrame(const ImageGrid& g) : dims(g.dims), h(g.voxel_size), lo(g.origin) {
        for (int a = 0; a < 3; ++a) hi[a] = lo[a] + dims[a] * h[a];
    }
};

// Ray for (view, detector cell) under the conventions documented on
// ScanGeometry. For Parallel2D the ray is placed in the grid's mid-z plane.
Ray ray_for(const ScanGeometry& g, const GridFrame& f, int view, int cell) {
    double theta = g.angles[view];
    double c = std::cos(theta), s = std::sin(theta);
    if (g.kind == ScanGeometry::Kind::Parallel2D) {
        double off = (cell - 0.5 * (g.n_p - 1)) * g.detector_spacing;
        double zmid = f.lo[2] + 0.5 * f.h[2];
        return {{off * c, off * s, zmid}, {-s, c, 0.0}};
    }
    // ConeBeam3D: source -> panel cell.
    int row = cell / g.detector_cols;
    int col = cell % g.detector_cols;
    double du = (col - 0.5 * (g.detector_cols - 1)) * g.detector_spacing;
    double dv = (row - 0.5 * (g.detector_rows - 1)) * g.detector_spacing;
    std::array<double, 3> src = {g.source_distance * c, g.source_distance * s, 0.0};
    std::array<double, 3> hit = {-g.detector_distance * c - du * s,
                                 -g.detector_distance * s + du * c, dv};
    std::array<double, 3> dir = {hit[0] - src[0], hit[1] - src[1], hit[2] - src[2]};
    double len = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
    for (auto& v : dir) v /= len;
    return {src, dir};
}

// Walks the ray through the grid and calls emit(linear_index, chord_length)
// once per crossed voxel, in traversal order. Chord lengths are the exact
// segment lengths of the line inside each voxel, so summing emitted
// length * value gives the exact line integral of the piecewise-constant
// image. The voxel for each segment is identified by the segment midpoint,
// which is robust against crossings that land on voxel boundaries.
template <class Emit>
void trace_line(const GridFrame& f, const Ray& ray, Emit&& emit) {
    double tmin = -kInf, tmax = kInf;
    for (int a = 0; a < 3; ++a) {
        if (std::abs(ray.d[a]) < kParallelEps) {
            if (ray.p[a] < f.lo[a] || ray.p[a] > f.hi[a]) return;
        } else {
            double t0 = (f.lo[a] - ray.p[a]) / ray.d[a];
            double t1 = (f.hi[a] - ray.p[a]) / ray.d[a];
            if (t0 > t1) std::swap(t0, t1);
            tmin = std::max(tmin, t0);
            tmax = std::min(tmax, t1);
        }
    }
    if (!(tmin < tmax)) return;  // misses or grazes the box

    // Parameter step per voxel and parameter of the next boundary crossing,
    // per axis.
    std::array<double, 3> tnext, tstep;
    for (int a = 0; a < 3; ++a) {
        if (std::abs(ray.d[a]) < kParallelEps) {
            tnext[a] = kInf;
            tstep[a] = kInf;
            continue;
        }
        tstep[a] = f.h[a] / std::abs(ray.d[a]);
        double entry = ray.p[a] + tmin * ray.d[a];
        double cell = std::floor((entry - f.lo[a]) / f.h[a]);
        double boundary = ray.d[a] > 0 ? cell + 1.0 : cell;
        tnext[a] = (f.lo[a] + boundary * f.h[a] - ray.p[a]) / ray.d[a];
        while (tnext[a] <= tmin) tnext[a] += tstep[a];
    }

    double t = tmin;
    while (t < tmax) {
        double tn = std::min({tnext[0], tnext[1], tnext[2], tmax});
        double len = tn - t;
        if (len > 0.0) {
            double tm = 0.5 * (t + tn);
            std::size_t idx = 0, mult = 1;
            for (int a = 0; a < 3; ++a) {
                int c = static_cast<int>(std::floor((ray.p[a] + tm * ray.d[a] - f.lo[a]) / f.h[a]));
                c = std::clamp(c, 0, f.dims[a] - 1);
                idx += static_cast<std::size_t>(c) * mult;
                mult *= static_cast<std::size_t>(f.dims[a]);
            }
            emit(idx, len);
        }
        for (int a = 0; a < 3; ++a)
            if (tnext[a] <= tn) tnext[a] += tstep[a];
        t = tn;
    }
}

void validate_pair(const ImageGrid& grid, const ScanGeometry& geom, const AngleSubset& subset) {
    grid.validate();
    geom.validate();
    if (geom.kind == ScanGeometry::Kind::Parallel2D && grid.dims[2] != 1)
        throw ArgumentError("projector: Parallel2D requires a single-slice grid (nz == 1)");
    if (subset.indices.empty()) throw ArgumentError("projector: empty angle subset");
    int prev = -1;
    for (int i : subset.indices) {
        if (i <= prev) throw ArgumentError("projector: subset must be strictly increasing");
        if (i < 0 || i >= geom.n_theta())
            throw ArgumentError("projector: subset index " + std::to_string(i) +
                                " outside [0, " + std::to_string(geom.n_theta()) + ")");
        prev = i;
    }
}

// Accumulates one view's adjoint contribution y_view^T rows into buf.
void splat_view(const ScanGeometry& geom, const GridFrame& f, int view, const double* y_view,
                std::vector<double>& buf) {
    for (int j = 0; j < geom.n_p; ++j) {
        double w = y_view[j];
        if (w == 0.0) continue;  // adding w*len == +-0.0 never changes a double
        trace_line(f, ray_for(geom, f, view, j),
                   [&](std::size_t idx, double len) { buf[idx] += w * len; });
    }
}

} // namespace

std::vector<double> forward_project(const ImageGrid& x, const ScanGeometry& geom,
                                    const AngleSubset& subset, int threads) {
    validate_pair(x, geom, subset);
    GridFrame f(x);
    const int n_p = geom.n_p;
    std::vector<double> out(static_cast<std::size_t>(subset.count()) * n_p, 0.0);
    parallel_for(out.size(), threads, [&](std::size_t r) {
        int view = subset.indices[r / n_p];
        int cell = static_cast<int>(r % n_p);
        double acc = 0.0;
        trace_line(f, ray_for(geom, f, view, cell),
                   [&](std::size_t idx, double len) { acc += x.values[idx] * len; });
        out[r] = acc;
    });
    return out;
}

ImageGrid back_project(const std::vector<double>& y, const ScanGeometry& geom,
                       const AngleSubset& subset, const ImageGrid& grid_like, int threads) {
    validate_pair(grid_like, geom, subset);
    const int n_p = geom.n_p;
    const int m = subset.count();
    if (y.size() != static_cast<std::size_t>(m) * n_p)
        throw ArgumentError("back_project: y has " + std::to_string(y.size()) +
                            " entries, subset implies " + std::to_string(std::size_t(m) * n_p));

    ImageGrid out = grid_like;
    std::fill(out.values.begin(), out.values.end(), 0.0);
    GridFrame f(grid_like);
    const std::size_t d = out.values.size();

    // Per-view partial images, reduced sequentially in ascending view order.
    // The reduction order is fixed, so the result is bit-identical for any
    // thread count.
    constexpr int kChunk = 16;
    std::vector<std::vector<double>> partials(std::min(kChunk, m));
    for (auto& p : partials) p.resize(d);
    for (int base = 0; base < m; base += kChunk) {
        int cnt = std::min(kChunk, m - base);
        parallel_for(static_cast<std::size_t>(cnt), threads, [&](std::size_t q) {
            auto& buf = partials[q];
            std::fill(buf.begin(), buf.end(), 0.0);
            int pos = base + static_cast<int>(q);
            splat_view(geom, f, subset.indices[pos], y.data() + std::size_t(pos) * n_p, buf);
        });
        for (int q = 0; q < cnt; ++q)
            for (std::size_t v = 0; v < d; ++v) out.values[v] += partials[q][v];
    }
    return out;
}

double subsampled_fidelity_value(const ImageGrid& x, const Sinogram& b,
                                 const AngleSubset& subset, int threads) {
    b.validate();
    auto r = forward_project(x, b.geometry, subset, threads);
    const int n_p = b.geometry.n_p;
    for (int pos = 0; pos < subset.count(); ++pos) {
        const double* brow = b.values.data() + std::size_t(subset.indices[pos]) * n_p;
        double* rrow = r.data() + std::size_t(pos) * n_p;
        for (int j = 0; j < n_p; ++j) rrow[j] -= brow[j];
    }
    double scale = b.geometry.n_theta() / (2.0 * subset.count());
    return scale * squared_norm(r);
}

FidelityEval subsampled_fidelity(const ImageGrid& x, const Sinogram& b,
                                 const AngleSubset& subset, int threads) {
    b.validate();
    auto r = forward_project(x, b.geometry, subset, threads);
    const int n_p = b.geometry.n_p;
    for (int pos = 0; pos < subset.count(); ++pos) {
        const double* brow = b.values.data() + std::size_t(subset.indices[pos]) * n_p;
        double* rrow = r.data() + std::size_t(pos) * n_p;
        for (int j = 0; j < n_p; ++j) rrow[j] -= brow[j];
    }
    FidelityEval out;
    out.value = b.geometry.n_theta() / (2.0 * subset.count()) * squared_norm(r);
    ImageGrid bp = back_project(r, b.geometry, subset, x, threads);
    double scale = static_cast<double>(b.geometry.n_theta()) / subset.count();
    out.gradient = std::move(bp.values);
    for (double& v : out.gradient) v *= scale;
    return out;
}

DenseMatrix assemble_dense(const ScanGeometry& geom, const ImageGrid& grid_like) {
    AngleSubset all = AngleSubset::full(geom.n_theta());
    validate_pair(grid_like, geom, all);
    DenseMatrix m;
    m.rows = geom.n();
    m.cols = grid_like.size();
    if (m.rows * m.cols > 1'000'000)
        throw SizeGuardError("assemble_dense: " + std::to_string(m.rows) + " x " +
                             std::to_string(m.cols) + " exceeds the 1e6-entry guard");
    m.a.assign(m.rows * m.cols, 0.0);
    GridFrame f(grid_like);
    for (std::size_t r = 0; r < m.rows; ++r) {
        int view = static_cast<int>(r / geom.n_p);
        int cell = static_cast<int>(r % geom.n_p);
        double* row = m.a.data() + r * m.cols;
        trace_line(f, ray_for(geom, f, view, cell),
                   [&](std::size_t idx, double len) { row[idx] += len; });
    }
    return m;
}

} // namespace stomo
