// expcalc.hpp — Exact iterated integrals of polynomial-exponential functions
// over ordered time simplices; the workhorse behind the closed-form engine
// paths and the Fano coefficient formulas.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "dcg/errors.hpp"

namespace dcg {

// One term c * s^m * e^{mu s} of a polynomial-exponential function of s.
struct ExpPolyTerm {
    std::complex<double> coef;
    std::complex<double> mu;
    int power = 0;
};

using ExpPoly = std::vector<ExpPolyTerm>;

namespace expdetail {

inline void add_term(ExpPoly& p, std::complex<double> c, std::complex<double> mu, int m,
                     double mu_merge_tol) {
    if (c == std::complex<double>{0.0, 0.0}) return;
    for (auto& t : p) {
        if (t.power == m && std::abs(t.mu - mu) <= mu_merge_tol) {
            t.coef += c;
            return;
        }
    }
    p.push_back({c, mu, m});
}

} // namespace expdetail

// Antiderivative step: given f(u) = sum c u^m e^{mu u}, return
// F(s) = int_0^s e^{nu u} f(u) du as another polynomial-exponential in s.
// `scale` bounds the s values at which F will be evaluated; exponents with
// |w| * scale below the series threshold go through a Taylor branch to avoid
// cancellation.
inline ExpPoly integrate_exp_poly(const ExpPoly& f, std::complex<double> nu, double scale) {
    ExpPoly out;
    const double merge_tol = 1e-13 * std::max(1.0, std::abs(nu));
    for (const auto& term : f) {
        const std::complex<double> w = term.mu + nu;
        const int m = term.power;
        // The upward E_m recurrence is only stable for |w s| well above m;
        // below that use the series, which converges for any argument.
        if (std::abs(w) * scale < std::max(0.7, 1.2 * m + 2.0)) {
            // int_0^s u^m e^{wu} du = sum_j w^j s^{m+j+1} / (j! (m+j+1))
            std::complex<double> wj{1.0, 0.0};
            double jfact = 1.0;
            for (int j = 0; j <= 120; ++j) {
                expdetail::add_term(out, term.coef * wj / (jfact * (m + j + 1)), {0.0, 0.0},
                                    m + j + 1, merge_tol);
                wj *= w;
                jfact *= (j + 1.0);
                if (j > 3 && std::abs(wj) * std::pow(scale, j + 1) / jfact < 1e-24) break;
            }
        } else {
            // E_m(s) = int_0^s u^m e^{wu} du = e^{ws} sum_r alpha_r s^r + alpha_c
            std::vector<std::complex<double>> alpha(m + 1, {0.0, 0.0});
            std::complex<double> alpha_c;
            alpha[0] = 1.0 / w;
            alpha_c = -1.0 / w;
            for (int k = 1; k <= m; ++k) {
                std::vector<std::complex<double>> next(m + 1, {0.0, 0.0});
                for (int r = 0; r <= k; ++r) {
                    std::complex<double> v = (r == k) ? std::complex<double>{1.0, 0.0}
                                                      : std::complex<double>{0.0, 0.0};
                    v -= double(k) * alpha[r];
                    next[r] = v / w;
                }
                alpha_c = -double(k) * alpha_c / w;
                alpha = std::move(next);
            }
            for (int r = 0; r <= m; ++r)
                expdetail::add_term(out, term.coef * alpha[r], term.mu + nu, r, merge_tol);
            expdetail::add_term(out, term.coef * alpha_c, {0.0, 0.0}, 0, merge_tol);
        }
    }

    // Prune negligible terms. Terms with growing exponentials are kept
    // unconditionally: their blow-up cancels symbolically at later levels, so
    // magnitude estimates evaluated here would misjudge them.
    double logmax = -1e300;
    std::vector<double> logmag(out.size());
    const double logscale = std::log(std::max(scale, 1e-30));
    for (std::size_t k = 0; k < out.size(); ++k) {
        logmag[k] = std::log(std::max(std::abs(out[k].coef), 1e-300)) + out[k].power * logscale;
        logmax = std::max(logmax, logmag[k]);
    }
    ExpPoly pruned;
    pruned.reserve(out.size());
    for (std::size_t k = 0; k < out.size(); ++k)
        if (out[k].mu.real() > 0.0 || logmag[k] > logmax - 51.0) pruned.push_back(out[k]);
    return pruned;
}

inline std::complex<double> eval_exp_poly(const ExpPoly& f, double s) {
    std::complex<double> v{0.0, 0.0};
    for (const auto& t : f) v += t.coef * std::pow(s, t.power) * std::exp(t.mu * s);
    return v;
}

// Exact integral of e^{sum_k nu_k s_k} over the ordered simplex
// tau >= s_1 >= s_2 >= ... >= s_n >= 0; nu_k multiplies the k-th largest time.
// Times are rescaled to the unit simplex first, which keeps the polynomial
// parts of the intermediate antiderivatives well conditioned at large tau.
inline std::complex<double> ordered_simplex_exp_integral(const std::vector<std::complex<double>>& nu,
                                                         double tau) {
    if (nu.empty()) return {1.0, 0.0};
    ExpPoly g{{{1.0, 0.0}, {0.0, 0.0}, 0}};
    for (std::size_t k = nu.size(); k-- > 0;) g = integrate_exp_poly(g, nu[k] * tau, 1.0);
    double tau_pow = 1.0;
    for (std::size_t k = 0; k < nu.size(); ++k) tau_pow *= tau;
    return tau_pow * eval_exp_poly(g, 1.0);
}

// Stable int_{lo}^{hi} e^{w u} du.
inline std::complex<double> exp_segment_integral(std::complex<double> w, double lo, double hi) {
    const double span = std::max(std::abs(lo), std::abs(hi));
    if (std::abs(w) * span < 0.5) {
        // series sum_{j>=1} w^{j-1} (hi^j - lo^j) / j!
        std::complex<double> sum{0.0, 0.0};
        std::complex<double> wpow{1.0, 0.0};
        double lp = lo, hp = hi, fact = 1.0;
        for (int j = 1; j <= 40; ++j) {
            fact *= j;
            const std::complex<double> add = wpow * ((hp - lp) / fact);
            sum += add;
            wpow *= w;
            lp *= lo;
            hp *= hi;
            if (j > 3 && std::abs(add) < 1e-22 * std::max(1.0, std::abs(sum))) break;
        }
        return sum;
    }
    return (std::exp(w * hi) - std::exp(w * lo)) / w;
}

// ------------------- chain/interleaving enumeration -------------------------

// Linear extensions of two independent descending chains. Chain X must take
// slots in order, chain Y likewise; a mask choosing the slots of X determines
// the extension. Returns, per extension, slot_var[j] = index of the variable
// occupying descending slot j, where variables 0..len_x-1 form chain X
// (descending: var 0 largest) and len_x..len_x+len_y-1 chain Y (var len_x
// largest).
inline std::vector<std::vector<int>> chain_interleavings(int len_x, int len_y) {
    const int n = len_x + len_y;
    std::vector<std::vector<int>> out;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<int>(__builtin_popcount(mask)) != len_x) continue;
        std::vector<int> slot_var(n);
        int ix = 0, iy = 0;
        for (int j = 0; j < n; ++j) {
            if (mask & (1u << j))
                slot_var[j] = ix++;
            else
                slot_var[j] = len_x + iy++;
        }
        out.push_back(std::move(slot_var));
    }
    return out;
}

} // namespace dcg
