#include <doctest.h>

#include <stomo/errors.hpp>
#include <stomo/regularizer.hpp>
#include <stomo/rng.hpp>

#include <cmath>
#include <limits>
#include <vector>

using namespace stomo;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Scalar objective whose minimizer over t the prox must return:
//   argmin_t  (t - v)^2 / (2 alpha) + r(t)
double scalar_penalty(const Regularizer& reg, double t) {
    switch (reg.kind) {
        case Regularizer::Kind::Zero: return 0.0;
        case Regularizer::Kind::NonNeg: return t < 0.0 ? kInf : 0.0;
        case Regularizer::Kind::L1: return reg.mu * std::abs(t);
        case Regularizer::Kind::L1NonNeg: return t < 0.0 ? kInf : reg.mu * t;
    }
    return 0.0;
}

// Brute-force prox of a scalar: grid-scan for the minimizer of
// (t - v)^2 / (2 alpha) + r(t). The range always covers both v and 0, so
// every kind's minimizer lies inside. Coarse pass, then a fine pass around
// the coarse winner (the objective is convex, so refinement is sound).
double brute_force_prox(const Regularizer& reg, double v, double alpha) {
    double tau = alpha * reg.mu;
    auto scan = [&](double lo, double hi, double step) {
        double best_t = lo, best_val = kInf;
        long long steps = static_cast<long long>((hi - lo) / step) + 1;
        for (long long i = 0; i <= steps; ++i) {
            double t = lo + static_cast<double>(i) * step;
            double d = t - v;
            double val = d * d / (2.0 * alpha) + scalar_penalty(reg, t);
            if (val < best_val) {
                best_val = val;
                best_t = t;
            }
        }
        return best_t;
    };
    double lo = std::min(v, 0.0) - tau - 0.1;
    double hi = std::max(v, 0.0) + tau + 0.1;
    double coarse = scan(lo, hi, 1e-3);
    return scan(coarse - 2e-3, coarse + 2e-3, 1e-5);
}

const Regularizer kAllKinds[] = {
    {Regularizer::Kind::Zero, 0.0},
    {Regularizer::Kind::NonNeg, 0.0},
    {Regularizer::Kind::L1, 1.3},
    {Regularizer::Kind::L1NonNeg, 0.7},
};

} // namespace

TEST_CASE("Regularizer::validate rejects bad mu") {
    Regularizer ok{Regularizer::Kind::L1, 0.5};
    CHECK_NOTHROW(ok.validate());
    Regularizer zero_mu{Regularizer::Kind::L1, 0.0};
    CHECK_NOTHROW(zero_mu.validate());
    Regularizer neg{Regularizer::Kind::L1, -0.1};
    CHECK_THROWS_AS(neg.validate(), ArgumentError);
    Regularizer nan_mu{Regularizer::Kind::L1NonNeg, std::nan("")};
    CHECK_THROWS_AS(nan_mu.validate(), ArgumentError);
    Regularizer inf_mu{Regularizer::Kind::NonNeg, kInf};
    CHECK_THROWS_AS(inf_mu.validate(), ArgumentError);
}

TEST_CASE("eval matches the closed-form penalty values") {
    std::vector<double> x = {1.0, -2.0, 0.5, 0.0};
    CHECK(eval({Regularizer::Kind::Zero, 0.0}, x) == 0.0);
    CHECK(eval({Regularizer::Kind::L1, 2.0}, x) == doctest::Approx(2.0 * 3.5).epsilon(1e-15));
    CHECK(eval({Regularizer::Kind::NonNeg, 0.0}, x) == kInf);
    CHECK(eval({Regularizer::Kind::L1NonNeg, 2.0}, x) == kInf);

    std::vector<double> pos = {1.0, 2.0, 0.0};
    CHECK(eval({Regularizer::Kind::NonNeg, 0.0}, pos) == 0.0);
    CHECK(eval({Regularizer::Kind::L1NonNeg, 0.5}, pos) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("eval treats the nonnegativity constraint exactly (no tolerance)") {
    std::vector<double> tiny = {-1e-15};
    CHECK(eval({Regularizer::Kind::NonNeg, 0.0}, tiny) == kInf);
    CHECK(eval({Regularizer::Kind::L1NonNeg, 1.0}, tiny) == kInf);
    std::vector<double> zero = {0.0};
    CHECK(eval({Regularizer::Kind::NonNeg, 0.0}, zero) == 0.0);
}

TEST_CASE("prox closed forms on hand values") {
    double alpha = 0.5;

    std::vector<double> v = {2.0, -1.0, 0.3, 0.0};
    CHECK(prox({Regularizer::Kind::Zero, 0.0}, v, alpha) == v);

    std::vector<double> nn = prox({Regularizer::Kind::NonNeg, 0.0}, v, alpha);
    CHECK(nn == std::vector<double>{2.0, 0.0, 0.3, 0.0});

    // L1 with mu = 1: threshold alpha*mu = 0.5
    std::vector<double> l1 = prox({Regularizer::Kind::L1, 1.0}, v, alpha);
    CHECK(l1[0] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(l1[1] == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(l1[2] == 0.0);
    CHECK(l1[3] == 0.0);

    std::vector<double> l1nn = prox({Regularizer::Kind::L1NonNeg, 1.0}, v, alpha);
    CHECK(l1nn[0] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(l1nn[1] == 0.0);
    CHECK(l1nn[2] == 0.0);
    CHECK(l1nn[3] == 0.0);
}

TEST_CASE("prox_inplace agrees with prox") {
    Rng r(3);
    for (const Regularizer& reg : kAllKinds) {
        std::vector<double> v(64);
        for (double& e : v) e = 4.0 * (r.next_unit() - 0.5);
        std::vector<double> copy = v;
        std::vector<double> out = prox(reg, v, 0.37);
        prox_inplace(reg, copy, 0.37);
        CHECK(copy == out);
    }
}

TEST_CASE("prox requires alpha > 0") {
    std::vector<double> v = {1.0};
    CHECK_THROWS_AS(prox({Regularizer::Kind::L1, 1.0}, v, 0.0), ArgumentError);
    CHECK_THROWS_AS(prox({Regularizer::Kind::Zero, 0.0}, v, -1.0), ArgumentError);
}

TEST_CASE("prox matches a brute-force scalar minimizer for every kind") {
    Rng r(11);
    for (const Regularizer& reg : kAllKinds) {
        for (int trial = 0; trial < 200; ++trial) {
            double v = 6.0 * (r.next_unit() - 0.5);
            double alpha = 0.05 + 1.5 * r.next_unit();
            std::vector<double> res = prox(reg, {v}, alpha);
            double expect = brute_force_prox(reg, v, alpha);
            CHECK(std::abs(res[0] - expect) < 2e-5);
        }
    }
}

TEST_CASE("prox is nonexpansive in the Euclidean norm") {
    Rng r(19);
    for (const Regularizer& reg : kAllKinds) {
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> a(16), b(16);
            for (int i = 0; i < 16; ++i) {
                a[i] = 5.0 * (r.next_unit() - 0.5);
                b[i] = 5.0 * (r.next_unit() - 0.5);
            }
            double alpha = 0.1 + r.next_unit();
            std::vector<double> pa = prox(reg, a, alpha);
            std::vector<double> pb = prox(reg, b, alpha);
            double din = 0.0, dout = 0.0;
            for (int i = 0; i < 16; ++i) {
                din += (a[i] - b[i]) * (a[i] - b[i]);
                dout += (pa[i] - pb[i]) * (pa[i] - pb[i]);
            }
            CHECK(dout <= din + 1e-12);
        }
    }
}
