#include "stomo/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "stomo/errors.hpp"
#include "stomo/vec.hpp"

namespace stomo {
namespace {

void check_same_dims(const ImageGrid& a, const ImageGrid& b) {
    a.validate();
    b.validate();
    if (a.dims != b.dims) throw ArgumentError("metrics: image dims differ");
}

constexpr int kWinRadius = 5;  // 11-tap window

std::array<double, 2 * kWinRadius + 1> gaussian_window() {
    std::array<double, 2 * kWinRadius + 1> w{};
    double sum = 0.0;
    for (int i = -kWinRadius; i <= kWinRadius; ++i) {
        w[i + kWinRadius] = std::exp(-0.5 * (i * i) / (1.5 * 1.5));
        sum += w[i + kWinRadius];
    }
    for (double& v : w) v /= sum;
    return w;
}

// In-place separable convolution along one axis with zero padding. Only
// positions where the window fits are consumed by the caller, so the edge
// values never influence the result.
void filter_axis(std::vector<double>& a, const std::array<int, 3>& dims, int axis,
                 const std::array<double, 2 * kWinRadius + 1>& w) {
    const int n = dims[axis];
    std::array<std::size_t, 3> stride = {1, static_cast<std::size_t>(dims[0]),
                                         static_cast<std::size_t>(dims[0]) * dims[1]};
    const std::size_t s = stride[axis];
    const int n_other1 = dims[(axis + 1) % 3];
    const int n_other2 = dims[(axis + 2) % 3];
    const std::size_t s1 = stride[(axis + 1) % 3];
    const std::size_t s2 = stride[(axis + 2) % 3];

    std::vector<double> line(n);
    for (int j2 = 0; j2 < n_other2; ++j2) {
        for (int j1 = 0; j1 < n_other1; ++j1) {
            std::size_t base = j1 * s1 + j2 * s2;
            for (int i = 0; i < n; ++i) line[i] = a[base + i * s];
            for (int i = 0; i < n; ++i) {
                double acc = 0.0;
                for (int k = -kWinRadius; k <= kWinRadius; ++k) {
                    int p = i + k;
                    if (p >= 0 && p < n) acc += w[k + kWinRadius] * line[p];
                }
                a[base + i * s] = acc;
            }
        }
    }
}

} // namespace

double relative_error(const ImageGrid& x, const ImageGrid& gt) {
    check_same_dims(x, gt);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.values.size(); ++i) {
        double d = x.values[i] - gt.values[i];
        num += d * d;
        den += gt.values[i] * gt.values[i];
    }
    if (den == 0.0) throw ArgumentError("relative_error: reference image is identically zero");
    return std::sqrt(num) / std::sqrt(den);
}

double psnr(const ImageGrid& x, const ImageGrid& gt, std::optional<double> peak) {
    check_same_dims(x, gt);
    double p = peak ? *peak : *std::max_element(gt.values.begin(), gt.values.end());
    if (!(p > 0.0)) throw ArgumentError("psnr: peak must be positive");
    double mse = 0.0;
    for (std::size_t i = 0; i < x.values.size(); ++i) {
        double d = x.values[i] - gt.values[i];
        mse += d * d;
    }
    mse /= static_cast<double>(x.values.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(p * p / mse);
}

double ssim(const ImageGrid& a, const ImageGrid& b, std::optional<double> peak) {
    check_same_dims(a, b);
    double p = peak ? *peak : std::max(max_abs(a.values), max_abs(b.values));
    if (!peak && p == 0.0) return 1.0;  // two identically zero images
    if (!(p > 0.0)) throw ArgumentError("ssim: peak must be positive");

    const auto& dims = a.dims;
    std::array<bool, 3> active;
    for (int ax = 0; ax < 3; ++ax) {
        active[ax] = dims[ax] > 1;
        if (active[ax] && dims[ax] < 2 * kWinRadius + 1)
            throw ArgumentError("ssim: every axis with more than one voxel needs at least " +
                                std::to_string(2 * kWinRadius + 1) + " voxels");
    }
    if (!active[0] && !active[1] && !active[2])
        throw ArgumentError("ssim: image must extend along at least one axis");

    const std::size_t sz = a.values.size();
    std::vector<double> mx = a.values, my = b.values, mxx(sz), myy(sz), mxy(sz);
    for (std::size_t i = 0; i < sz; ++i) {
        mxx[i] = a.values[i] * a.values[i];
        myy[i] = b.values[i] * b.values[i];
        mxy[i] = a.values[i] * b.values[i];
    }
    auto w = gaussian_window();
    for (int ax = 0; ax < 3; ++ax) {
        if (!active[ax]) continue;
        filter_axis(mx, dims, ax, w);
        filter_axis(my, dims, ax, w);
        filter_axis(mxx, dims, ax, w);
        filter_axis(myy, dims, ax, w);
        filter_axis(mxy, dims, ax, w);
    }

    const double c1 = (0.01 * p) * (0.01 * p);
    const double c2 = (0.03 * p) * (0.03 * p);
    std::array<int, 3> lo, hi;
    for (int ax = 0; ax < 3; ++ax) {
        lo[ax] = active[ax] ? kWinRadius : 0;
        hi[ax] = active[ax] ? dims[ax] - kWinRadius : dims[ax];
    }
    double sum = 0.0;
    long long count = 0;
    for (int iz = lo[2]; iz < hi[2]; ++iz)
        for (int iy = lo[1]; iy < hi[1]; ++iy)
            for (int ix = lo[0]; ix < hi[0]; ++ix) {
                std::size_t i = ix + static_cast<std::size_t>(dims[0]) * (iy + static_cast<std::size_t>(dims[1]) * iz);
                double ux = mx[i], uy = my[i];
                double vx = mxx[i] - ux * ux;
                double vy = myy[i] - uy * uy;
                double vxy = mxy[i] - ux * uy;
                sum += ((2.0 * ux * uy + c1) * (2.0 * vxy + c2)) /
                       ((ux * ux + uy * uy + c1) * (vx + vy + c2));
                ++count;
            }
    return sum / static_cast<double>(count);
}

MetricsReport compute_metrics(const ImageGrid& x, const ImageGrid& gt) {
    MetricsReport r;
    r.re = relative_error(x, gt);
    r.psnr_db = psnr(x, gt);
    r.ssim_val = ssim(x, gt);
    return r;
}

} // namespace stomo
