// special_functions.hpp — Hurwitz zeta and small thermal helpers

#pragma once

#include <cmath>
#include <complex>

#include "dcg/errors.hpp"

namespace dcg {

namespace detail {
// B_{2j}/(2j)! for j = 1..8
inline constexpr double bernoulli_over_fact[9] = {
    0.0,
    8.3333333333333333e-02,   // B2/2!
    -1.3888888888888889e-03,  // B4/4!
    3.3068783068783069e-05,   // B6/6!
    -8.2671957671957672e-07,  // B8/8!
    2.0876756987868099e-08,
    -5.2841901386874932e-10,
    1.3382536530684679e-11,
    -3.3896802963225829e-13,
};
} // namespace detail

// Hurwitz zeta sum_{n>=0} (n+a)^{-s} for real s > 1 and complex a with
// Re a > 0. Euler-Maclaurin: 30 direct terms plus Bernoulli corrections
// to order 8; relative accuracy ~1e-12 over the parameter ranges used here.
inline std::complex<double> hurwitz_zeta(double s, std::complex<double> a) {
    if (!(s > 1.0)) throw domain_error("hurwitz_zeta: requires s > 1");
    if (!(a.real() > 0.0)) throw domain_error("hurwitz_zeta: requires Re a > 0");

    using C = std::complex<double>;
    const int n_direct = 30;
    const bool s_is_two = (s == 2.0);

    C sum{0.0, 0.0};
    for (int n = 0; n < n_direct; ++n) {
        const C an = a + double(n);
        sum += s_is_two ? 1.0 / (an * an) : std::exp(-s * std::log(an));
    }

    const C big = a + double(n_direct);
    const C big_pow = s_is_two ? 1.0 / (big * big) : std::exp(-s * std::log(big));

    // integral tail + half-term
    sum += big_pow * big / (s - 1.0);
    sum += 0.5 * big_pow;

    // Bernoulli corrections: B_{2j}/(2j)! * (s)_{2j-1} * big^{-s-2j+1}
    C rising{s, 0.0};            // (s)_1
    C power = big_pow / big;     // big^{-s-1}
    for (int j = 1; j <= 4; ++j) {
        sum += detail::bernoulli_over_fact[j] * rising * power;
        // advance (s)_{2j-1} -> (s)_{2j+1} and big^{-s-2j+1} -> big^{-s-2j-1}
        rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
        power /= big * big;
    }
    return sum;
}

// Bose occupation n(w) = 1/(e^{bw} - 1); w may be negative.
inline double bose_occupation(double beta, double w) {
    return 1.0 / std::expm1(beta * w);
}

} // namespace dcg
