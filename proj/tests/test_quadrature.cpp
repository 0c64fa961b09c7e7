#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dcg/expcalc.hpp"
#include "dcg/quadrature.hpp"

using namespace dcg;
using C = std::complex<double>;

TEST_CASE("gauss_legendre integrates polynomials exactly") {
    const auto rule = gauss_legendre(8);
    double wsum = 0.0, x14 = 0.0;
    for (int i = 0; i < 8; ++i) {
        wsum += rule.weights[i];
        x14 += rule.weights[i] * std::pow(rule.nodes[i], 14);
    }
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(x14 == doctest::Approx(2.0 / 15.0).epsilon(1e-13)); // exact up to degree 15
}

TEST_CASE("adaptive integrator on oscillatory and peaked integrands") {
    SUBCASE("oscillatory") {
        const double w = 37.0;
        auto res = adaptive_integrate([&](double x) { return C{std::cos(w * x), 0.0}; }, 0.0, 3.0,
                                      {1e-12, 1e-12, 100000});
        CHECK(res.converged);
        CHECK(std::abs(res.value.real() - std::sin(w * 3.0) / w) < 1e-10);
    }
    SUBCASE("narrow Lorentzian") {
        const double d = 1e-3;
        auto res = adaptive_integrate(
            [&](double x) { return C{d / (x * x + d * d), 0.0}; }, -50.0, 50.0,
            {1e-12, 1e-10, 200000}, {-d, 0.0, d});
        CHECK(res.converged);
        CHECK(std::abs(res.value.real() - 2.0 * std::atan(50.0 / d)) < 1e-8);
    }
}

TEST_CASE("exp_segment_integral stable at small and large arguments") {
    for (C w : {C{1e-14, 0.0}, C{0.0, 1e-9}, C{0.3, -0.2}, C{0.0, 25.0}, C{-40.0, 3.0}}) {
        const double lo = 0.2, hi = 1.7;
        auto direct = adaptive_integrate([&](double u) { return std::exp(w * u); }, lo, hi,
                                         {1e-14, 1e-13, 100000});
        CHECK(std::abs(exp_segment_integral(w, lo, hi) - direct.value) < 1e-11);
    }
}

TEST_CASE("ordered simplex exponential integral vs quadrature") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> re(-3.0, 0.5), im(-6.0, 6.0);
    const double tau = 1.7;

    SUBCASE("n = 2 against nested quadrature") {
        for (int trial = 0; trial < 6; ++trial) {
            const C n1{re(rng), im(rng)}, n2{re(rng), im(rng)};
            const auto exact = ordered_simplex_exp_integral({n1, n2}, tau);
            auto outer = adaptive_integrate(
                [&](double s1) {
                    return std::exp(n1 * s1) * exp_segment_integral(n2, 0.0, s1);
                },
                0.0, tau, {1e-13, 1e-12, 100000});
            CHECK(std::abs(exact - outer.value) < 1e-10 * std::max(1.0, std::abs(outer.value)));
        }
    }

    SUBCASE("n = 4 against nested quadrature") {
        for (int trial = 0; trial < 3; ++trial) {
            std::vector<C> nu{{re(rng), im(rng)}, {re(rng), im(rng)}, {re(rng), im(rng)},
                              {re(rng), im(rng)}};
            const auto exact = ordered_simplex_exp_integral(nu, tau);
            // brute-force 4D Gauss-Legendre on the u-cube mapping
            const auto rule = gauss_legendre(24);
            C total{0.0, 0.0};
            for (int i1 = 0; i1 < 24; ++i1)
                for (int i2 = 0; i2 < 24; ++i2)
                    for (int i3 = 0; i3 < 24; ++i3)
                        for (int i4 = 0; i4 < 24; ++i4) {
                            const double u1 = 0.5 * (rule.nodes[i1] + 1.0);
                            const double u2 = 0.5 * (rule.nodes[i2] + 1.0);
                            const double u3 = 0.5 * (rule.nodes[i3] + 1.0);
                            const double u4 = 0.5 * (rule.nodes[i4] + 1.0);
                            const double s1 = tau * u1, s2 = s1 * u2, s3 = s2 * u3, s4 = s3 * u4;
                            const double jac = tau * s1 * s2 * s3; // d(s)/d(u) with weights below
                            const double w = rule.weights[i1] * rule.weights[i2] *
                                             rule.weights[i3] * rule.weights[i4] / 16.0;
                            total += w * jac *
                                     std::exp(nu[0] * s1 + nu[1] * s2 + nu[2] * s3 + nu[3] * s4);
                        }
            CHECK(std::abs(exact - total) < 1e-8 * std::max(1.0, std::abs(total)));
        }
    }

    SUBCASE("degenerate exponents reduce to volume") {
        const auto v = ordered_simplex_exp_integral({C{0, 0}, C{0, 0}, C{0, 0}}, 2.0);
        CHECK(std::abs(v - C{8.0 / 6.0, 0.0}) < 1e-13);
    }

    SUBCASE("near-degenerate exponents stay stable") {
        const C eps{1e-13, -1e-13};
        const auto a = ordered_simplex_exp_integral({C{0, 2.0}, eps, -eps}, 3.0);
        const auto b = ordered_simplex_exp_integral({C{0, 2.0}, C{0, 0}, C{0, 0}}, 3.0);
        CHECK(std::abs(a - b) < 1e-10 * std::abs(b));
    }
}

TEST_CASE("chain interleavings enumerate binomial(n, k) extensions") {
    CHECK(chain_interleavings(2, 2).size() == 6);
    CHECK(chain_interleavings(0, 3).size() == 1);
    CHECK(chain_interleavings(4, 0).size() == 1);
    // every extension keeps both chains in descending-slot order
    for (const auto& ext : chain_interleavings(2, 2)) {
        int last_x = -1, last_y = -1;
        for (int j = 0; j < 4; ++j) {
            if (ext[j] < 2) {
                CHECK(ext[j] > last_x);
                last_x = ext[j];
            } else {
                CHECK(ext[j] > last_y);
                last_y = ext[j];
            }
        }
    }
}
