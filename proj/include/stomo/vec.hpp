#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "stomo/errors.hpp"

namespace stomo {

// Small dense-vector helpers used across solvers, metrics and tests.
// All reductions run in index order so results are reproducible bit-for-bit.

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw ArgumentError("dot: size mismatch (" + std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()) + ")");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double squared_norm(const std::vector<double>& a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return s;
}

inline double norm(const std::vector<double>& a) { return std::sqrt(squared_norm(a)); }

inline double max_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

} // namespace stomo
