#pragma once

#include <optional>

#include "stomo/types.hpp"

namespace stomo {

// Image-quality metrics. All three require the two grids to have identical
// dims; values are compared as-is (voxel size plays no role).

// ||x - gt|| / ||gt||. Throws ArgumentError when ||gt|| == 0.
double relative_error(const ImageGrid& x, const ImageGrid& gt);

// 10 * log10(peak^2 / MSE) in dB. peak defaults to max(gt); a zero MSE
// yields +infinity. Explicit peaks must be positive.
double psnr(const ImageGrid& x, const ImageGrid& gt, std::optional<double> peak = {});

// Mean structural similarity with the standard 11-tap Gaussian window
// (sigma = 1.5), stabilizers C1 = (0.01 * peak)^2, C2 = (0.03 * peak)^2,
// averaged over window positions that fit entirely inside the image
// (2D windows for single-slice grids, 3D otherwise; every axis with more
// than one voxel must have at least 11). peak defaults to the largest
// absolute value found in either image, which keeps ssim(a, b) == ssim(b, a);
// two all-zero images compare equal (1.0).
double ssim(const ImageGrid& a, const ImageGrid& b, std::optional<double> peak = {});

struct MetricsReport {
    double re = 0.0;
    double psnr_db = 0.0;
    double ssim_val = 0.0;
};

// All three metrics with their default peaks.
MetricsReport compute_metrics(const ImageGrid& x, const ImageGrid& gt);

} // namespace stomo
