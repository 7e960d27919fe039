#include "stomo/regularizer.hpp"

#include <cmath>
#include <limits>

namespace stomo {

void Regularizer::validate() const {
    if (!(mu >= 0.0) || !std::isfinite(mu))
        throw ArgumentError("Regularizer: mu must be finite and >= 0");
}

double eval(const Regularizer& reg, const std::vector<double>& x) {
    reg.validate();
    bool wants_nonneg =
        reg.kind == Regularizer::Kind::NonNeg || reg.kind == Regularizer::Kind::L1NonNeg;
    bool wants_l1 = reg.kind == Regularizer::Kind::L1 || reg.kind == Regularizer::Kind::L1NonNeg;
    if (wants_nonneg) {
        for (double v : x)
            if (v < 0.0) return std::numeric_limits<double>::infinity();
    }
    if (!wants_l1) return 0.0;
    double l1 = 0.0;
    for (double v : x) l1 += std::abs(v);
    return reg.mu * l1;
}

void prox_inplace(const Regularizer& reg, std::vector<double>& v, double alpha) {
    reg.validate();
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw ArgumentError("prox: alpha must be positive and finite");
    switch (reg.kind) {
        case Regularizer::Kind::Zero:
            return;
        case Regularizer::Kind::NonNeg:
            for (double& x : v) x = std::max(x, 0.0);
            return;
        case Regularizer::Kind::L1: {
            double tau = alpha * reg.mu;
            for (double& x : v) {
                double mag = std::abs(x) - tau;
                x = mag > 0.0 ? std::copysign(mag, x) : 0.0;
            }
            return;
        }
        case Regularizer::Kind::L1NonNeg: {
            double tau = alpha * reg.mu;
            for (double& x : v) x = std::max(x - tau, 0.0);
            return;
        }
    }
}

std::vector<double> prox(const Regularizer& reg, const std::vector<double>& v, double alpha) {
    std::vector<double> out = v;
    prox_inplace(reg, out, alpha);
    return out;
}

} // namespace stomo
