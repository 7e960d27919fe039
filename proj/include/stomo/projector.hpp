#pragma once

#include <cstddef>
#include <vector>

#include "stomo/types.hpp"

namespace stomo {

// Exact line-integral scan operators. forward_project and back_project are
// built from the same ray traversal and are therefore an exactly matched
// transpose pair: <A x, y> == <x, A^T y> up to floating-point roundoff.
//
// All operators accept an angle subset S (rows restricted to those views)
// and a thread count. Results are bit-identical for any thread count: the
// forward pass writes disjoint outputs per ray, and the adjoint reduces
// per-view partial images in a fixed order.

// Row block (A x)_S, laid out view-major: entry pos * n_p + j is detector
// cell j of subset view pos (subset order, which is ascending angle index).
std::vector<double> forward_project(const ImageGrid& x, const ScanGeometry& geom,
                                    const AngleSubset& subset, int threads = 1);

// Adjoint of the row block: A_S^T y on the grid shaped like `grid_like`
// (its values are ignored). y must have subset.count() * n_p entries in the
// same layout forward_project produces.
ImageGrid back_project(const std::vector<double>& y, const ScanGeometry& geom,
                       const AngleSubset& subset, const ImageGrid& grid_like,
                       int threads = 1);

// Sub-sampled data-fidelity value
//   f_S(x) = (n_theta / (2 |S|)) * || A_S x - b_S ||^2,
// an unbiased estimator of the full fidelity (1/2) * || A x - b ||^2 when S
// is drawn uniformly; for the full subset it equals it exactly.
double subsampled_fidelity_value(const ImageGrid& x, const Sinogram& b,
                                 const AngleSubset& subset, int threads = 1);

struct FidelityEval {
    double value = 0.0;
    std::vector<double> gradient;  // (n_theta / |S|) * A_S^T (A_S x - b_S)
};

// Value and gradient of f_S at x in one pass (one forward, one adjoint).
FidelityEval subsampled_fidelity(const ImageGrid& x, const Sinogram& b,
                                 const AngleSubset& subset, int threads = 1);

// Dense row-major system matrix for small problems (testing and analysis).
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> a;  // rows * cols, row-major

    double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

// Materializes all of A for `geom` over the grid shaped like `grid_like`.
// Throws SizeGuardError when rows * cols would exceed 1e6 entries.
DenseMatrix assemble_dense(const ScanGeometry& geom, const ImageGrid& grid_like);

} // namespace stomo
