// quadrature.hpp — Gauss-Legendre rules and a global-adaptive 1D integrator

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <queue>
#include <vector>

#include "dcg/errors.hpp"

namespace dcg {

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Nodes/weights by Newton iteration on the Legendre recurrence.
inline GaussRule gauss_legendre(int n) {
    if (n < 1) throw domain_error("gauss_legendre: n >= 1 required");
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int k = 0; k < (n + 1) / 2; ++k) {
        double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[k] = -x;
        rule.weights[k] = w;
        rule.nodes[n - 1 - k] = x;
        rule.weights[n - 1 - k] = w;
    }
    return rule;
}

namespace detail {
inline const GaussRule& rule15() {
    static const GaussRule r = gauss_legendre(15);
    return r;
}
inline const GaussRule& rule31() {
    static const GaussRule r = gauss_legendre(31);
    return r;
}
} // namespace detail

struct AdaptiveOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    std::size_t max_intervals = 200000;
};

struct AdaptiveResult {
    std::complex<double> value{0.0, 0.0};
    double error = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

// Global adaptive bisection with a GL15/GL31 error estimate per interval.
// `breakpoints` seeds the initial partition (useful near known features).
inline AdaptiveResult adaptive_integrate(const std::function<std::complex<double>(double)>& f,
                                         double a, double b, const AdaptiveOptions& opt = {},
                                         std::vector<double> breakpoints = {}) {
    using C = std::complex<double>;
    struct Interval {
        double a, b, err;
        C val;
        bool operator<(const Interval& o) const { return err < o.err; }
    };

    AdaptiveResult res;
    if (a == b) {
        res.converged = true;
        return res;
    }

    auto eval_interval = [&](double lo, double hi) {
        const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        C coarse{0.0, 0.0}, fine{0.0, 0.0};
        const auto& r15 = detail::rule15();
        const auto& r31 = detail::rule31();
        for (int i = 0; i < 15; ++i) coarse += r15.weights[i] * f(c + h * r15.nodes[i]);
        for (int i = 0; i < 31; ++i) fine += r31.weights[i] * f(c + h * r31.nodes[i]);
        res.evaluations += 46;
        Interval iv{lo, hi, std::abs(fine - coarse) * std::abs(h), fine * h};
        return iv;
    };

    std::erase_if(breakpoints, [&](double x) { return x <= a || x >= b; });
    breakpoints.push_back(a);
    breakpoints.push_back(b);
    std::sort(breakpoints.begin(), breakpoints.end());

    std::priority_queue<Interval> queue;
    C total{0.0, 0.0};
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i] == breakpoints[i + 1]) continue;
        auto iv = eval_interval(breakpoints[i], breakpoints[i + 1]);
        total += iv.val;
        total_err += iv.err;
        queue.push(iv);
    }

    std::size_t n_intervals = queue.size();
    while (total_err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) &&
           n_intervals < opt.max_intervals && !queue.empty()) {
        Interval worst = queue.top();
        queue.pop();
        total -= worst.val;
        total_err -= worst.err;
        const double mid = 0.5 * (worst.a + worst.b);
        for (auto half : {eval_interval(worst.a, mid), eval_interval(mid, worst.b)}) {
            total += half.val;
            total_err += half.err;
            queue.push(half);
        }
        ++n_intervals;
    }

    res.value = total;
    res.error = total_err;
    res.converged = total_err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    return res;
}

} // namespace dcg
