#pragma once

#include <vector>

#include "stomo/errors.hpp"

namespace stomo {

// Separable regularizer R(x) = mu * ||x||_1 + (optional) indicator of the
// nonnegative orthant. `mu` is only meaningful for the L1 kinds and is
// ignored by Zero / NonNeg.
struct Regularizer {
    enum class Kind { Zero, NonNeg, L1, L1NonNeg };

    Kind kind = Kind::Zero;
    double mu = 0.0;

    void validate() const;  // mu must be finite and >= 0
};

// R(x). The nonnegativity indicator is exact: any strictly negative
// component makes the value +infinity, with no tolerance.
double eval(const Regularizer& reg, const std::vector<double>& x);

// Proximal map prox_{alpha R}(v), computed in closed form per component:
//   Zero      v_i
//   NonNeg    max(v_i, 0)
//   L1        sign(v_i) * max(|v_i| - alpha*mu, 0)
//   L1NonNeg  max(v_i - alpha*mu, 0)
// Requires alpha > 0.
std::vector<double> prox(const Regularizer& reg, const std::vector<double>& v, double alpha);

// Same map, writing into v.
void prox_inplace(const Regularizer& reg, std::vector<double>& v, double alpha);

} // namespace stomo
