// models.hpp — Closed-form coefficients and solutions for the worked models:
// two-spin DCG2, spin-boson band-filter rates and populations, Fano-Anderson
// rate coefficients and DCG/BMS populations.

#pragma once

#include <array>
#include <functional>
#include <vector>

#include "dcg/bath.hpp"
#include "dcg/expcalc.hpp"
#include "dcg/linalg.hpp"
#include "dcg/quadrature.hpp"

namespace dcg::models {

using bath::BosonicBath;
using bath::FermionLeads;

// ------------------------------- parameters ---------------------------------

struct TwoSpinParams {
    double lambda = 0.25;
    double omega = 1.0;   // system splitting
    double Omega = 2.0;   // bath splitting
    double rho_b00 = 0.5; // bath polarization

    void validate() const {
        if (rho_b00 < 0.0 || rho_b00 > 1.0)
            throw domain_error("TwoSpinParams: rho_b00 must lie in [0,1]");
    }
};

enum class SpinBosonCoupling { Dephasing, Dissipative };

struct SpinBosonParams {
    double eps_d = 1.0;
    BosonicBath bath{};
    double lambda = 1.0;
    SpinBosonCoupling coupling = SpinBosonCoupling::Dissipative;

    void validate() const {
        if (!(eps_d > 0.0)) throw domain_error("SpinBosonParams: eps_d must be positive");
        bath.validate();
    }
};

struct FanoParams {
    double eps_d = 1.0;
    FermionLeads leads{};
    double lambda = 1.0;

    void validate() const { leads.validate(); }
};

// Second-order coefficients per lambda^2, fourth-order per lambda^4.
struct RateCoefficients {
    cplx m11{}, m14{}, m41{}, m44{};
    cplx p11{}, p14{};
    double tau = 0.0;
};

// ------------------------------ two-spin DCG2 --------------------------------

namespace detail {
inline double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }
} // namespace detail

// Closed-form interaction-picture DCG2 state of the Heisenberg two-spin model.
// The printed off-diagonal decay reads sinc^2[t(Omega-omega)]; the grain time
// and the evaluation time coincide on the interpolated trajectory.
inline DensityMatrix two_spin_dcg2(const TwoSpinParams& p, const DensityMatrix& rho0, double t) {
    p.validate();
    if (t < 0.0) throw domain_error("two_spin_dcg2: t must be nonnegative");
    if (rho0.dim() != 2) throw dimension_error("two_spin_dcg2: two-level model");

    const double lam = p.lambda, d = p.Omega - p.omega, r = p.rho_b00;
    const double s = detail::sinc(t * d);
    const double decay_pop = std::exp(-4.0 * lam * lam * t * t * s * s);
    const double rho00 = decay_pop * rho0(0, 0).real() + (1.0 - decay_pop) * r;

    const double mag =
        std::exp(-8.0 * lam * lam * t * t * r * (1.0 - r) - 2.0 * lam * lam * t * t * s * s);
    // (1 - sinc(2 t d))/d has a removable singularity at d = 0
    const double x = 2.0 * t * d;
    const double hterm = std::abs(x) < 1e-4 ? (2.0 / 3.0) * t * t * d * (1.0 - x * x / 20.0)
                                            : (1.0 - detail::sinc(x)) / d;
    const double phase = t * (2.0 * lam * lam * hterm + 2.0 * lam * (1.0 - 2.0 * r));
    const cplx rho01 = mag * std::exp(I_UNIT * phase) * rho0(0, 1);

    ComplexMatrix m(2, 2);
    m(0, 0) = rho00;
    m(1, 1) = 1.0 - rho00;
    m(0, 1) = rho01;
    m(1, 0) = std::conj(rho01);
    return DensityMatrix(std::move(m), Tolerances{1e-10, 1e-10, -1e-9});
}

// --------------------------- spin-boson coefficients -------------------------

namespace detail {

// G(|w|)/|e^{bw}-1| * |w|^{1-s}: the band weight with the w^{s-1} power split
// off, finite at w = 0 for any s > 0.
inline double band_weight_regular(const BosonicBath& b, double w) {
    const double aw = std::abs(w);
    if (aw < 1e-300) return b.g0 / b.beta;
    const double denom = std::abs(std::expm1(b.beta * w));
    if (b.beta * aw < 1e-8) return b.g0 * std::exp(-aw / b.omega_c) / b.beta;
    return b.g0 * aw * std::exp(-aw / b.omega_c) / denom;
}

// int Gt(w) sinc^2[(w - center) tau / 2] dw over the full line, handling the
// integrable |w|^{s-1} factor at the origin by the substitution w = u^{1/s}.
inline double band_filter_integral(const BosonicBath& b, double center, double tau) {
    const double w_max =
        std::max({40.0 / b.beta, 20.0 * b.omega_c, std::abs(center) + 60.0 / tau});
    auto filter = [&](double w) {
        const double x = (w - center) * tau / 2.0;
        const double s = detail::sinc(x);
        return s * s;
    };

    const double w0 = std::min(1.0, b.omega_c); // power-split core half-width
    std::vector<double> breaks;
    for (double c : {center, -center})
        for (double off : {0.0, 2.0 * M_PI / tau, -2.0 * M_PI / tau, 20.0 / tau, -20.0 / tau, 1.0,
                           -1.0})
            breaks.push_back(c + off);

    double total = 0.0;
    // outer regions, plain adaptive
    for (auto [lo, hi] : {std::pair{-w_max, -w0}, std::pair{w0, w_max}}) {
        auto res = adaptive_integrate(
            [&](double w) { return cplx{bath::bosonic_band_weight(b, w) * filter(w), 0.0}; }, lo,
            hi, {1e-12, 1e-10, 400000}, breaks);
        total += res.value.real();
    }
    // core with the w = +-u^{1/s} substitution
    const double ucap = std::pow(w0, b.s);
    for (double sign : {1.0, -1.0}) {
        auto res = adaptive_integrate(
            [&](double u) -> cplx {
                const double w = u <= 0.0 ? 0.0 : std::exp(std::log(u) / b.s);
                return cplx{band_weight_regular(b, sign * w) * filter(sign * w) / b.s, 0.0};
            },
            0.0, ucap, {1e-12, 1e-10, 200000});
        total += res.value.real();
    }
    return total;
}

// ---------------- panel-Chebyshev antiderivative tables ----------------------

// F(x) = int_{x0}^x f(u) du from 9-point Chebyshev panels; evaluation anywhere
// in [x0, x1] without further f calls.
class ChebPrefix {
  public:
    ChebPrefix() = default;
    ChebPrefix(const std::function<cplx(double)>& f, double x0, double x1, double h)
        : x0_(x0), x1_(x1) {
        const std::size_t n_panels =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((x1 - x0) / h)));
        if (n_panels > 2000000) throw numerical_error("ChebPrefix: panel count too large");
        panels_.resize(n_panels);
        // Chebyshev-Lobatto nodes, descending
        std::array<double, kN + 1> xi;
        for (int j = 0; j <= kN; ++j) xi[j] = std::cos(M_PI * j / kN);
        cplx cum{0.0, 0.0};
        for (std::size_t pidx = 0; pidx < n_panels; ++pidx) {
            auto& p = panels_[pidx];
            p.a = x0 + (x1 - x0) * double(pidx) / double(n_panels);
            p.b = x0 + (x1 - x0) * double(pidx + 1) / double(n_panels);
            const double mid = 0.5 * (p.a + p.b), half = 0.5 * (p.b - p.a);
            std::array<cplx, kN + 1> v;
            for (int j = 0; j <= kN; ++j) v[j] = f(mid + half * xi[j]);
            // interpolation coefficients d_k: f = sum d_k T_k
            std::array<cplx, kN + 3> d{};
            for (int k = 0; k <= kN; ++k) {
                cplx acc{0.0, 0.0};
                for (int j = 0; j <= kN; ++j) {
                    const double w = (j == 0 || j == kN) ? 0.5 : 1.0;
                    acc += w * v[j] * std::cos(M_PI * j * k / kN);
                }
                d[k] = acc * (2.0 / kN);
            }
            d[0] *= 0.5;
            d[kN] *= 0.5;
            // antiderivative coefficients b_m, m = 1..kN+1
            p.anti.fill(cplx{0.0, 0.0});
            p.anti[1] = d[0] - 0.5 * d[2];
            for (int m = 2; m <= kN + 1; ++m) p.anti[m] = (d[m - 1] - d[m + 1]) / (2.0 * m);
            // normalize F(-1) = 0 and scale by the half-width
            cplx at_minus1{0.0, 0.0};
            for (int m = 1; m <= kN + 1; ++m) at_minus1 += p.anti[m] * (m % 2 ? -1.0 : 1.0);
            p.anti[0] = -at_minus1;
            for (auto& c : p.anti) c *= half;
            p.base = cum;
            cum += eval_panel(p, 1.0);
        }
        total_ = cum;
    }

    cplx eval(double x) const {
        if (panels_.empty()) return {0.0, 0.0};
        if (x <= x0_) return {0.0, 0.0};
        if (x >= x1_) return total_;
        const double rel = (x - x0_) / (x1_ - x0_) * double(panels_.size());
        std::size_t idx = std::min(panels_.size() - 1, static_cast<std::size_t>(rel));
        while (idx > 0 && x < panels_[idx].a) --idx;
        while (idx + 1 < panels_.size() && x > panels_[idx].b) ++idx;
        const auto& p = panels_[idx];
        const double xi = (2.0 * x - p.a - p.b) / (p.b - p.a);
        return p.base + eval_panel(p, xi);
    }

    cplx total() const { return total_; }

  private:
    static constexpr int kN = 8;
    struct Panel {
        double a = 0.0, b = 0.0;
        std::array<cplx, kN + 2> anti{};
        cplx base{};
    };

    static cplx eval_panel(const Panel& p, double xi) {
        // Clenshaw for sum_{m=0}^{kN+1} anti[m] T_m(xi)
        cplx b1{0.0, 0.0}, b2{0.0, 0.0};
        for (int m = kN + 1; m >= 1; --m) {
            const cplx bb = p.anti[m] + 2.0 * xi * b1 - b2;
            b2 = b1;
            b1 = bb;
        }
        return p.anti[0] + xi * b1 - b2;
    }

    std::vector<Panel> panels_;
    double x0_ = 0.0, x1_ = 0.0;
    cplx total_{};
};

// Fourth-order diagonal coefficient of the dissipative spin-boson model,
// before the overall 2 Re{.}: Wick pair products integrated over the chain
// t2 > t3 > t4 with t1 free, via nested prefix integrals.
inline cplx spin_boson_p_complex(double tau, const SpinBosonParams& sp, double eps) {
    const auto& b = sp.bath;
    auto corr = [&](double dt) { return bath::bosonic_pair_corr(b, dt); };
    auto fa = [&](double dt) { return corr(dt) * std::exp(I_UNIT * (-eps * dt)); };
    auto fb = [&](double dt) { return corr(dt) * std::exp(I_UNIT * (eps * dt)); };

    const double h =
        std::min({b.beta, 1.0 / b.omega_c, 0.5 / std::max(1.0, std::abs(eps))}) / 6.0;

    // signed prefix of A over [-tau, tau] and one-sided prefixes of A, B
    const ChebPrefix phi_a(fa, -tau, tau, h);
    const ChebPrefix h_a(fa, 0.0, tau, h);
    const ChebPrefix h_b(fb, 0.0, tau, h);
    auto i_a = [&](double s) { return phi_a.eval(tau - s) - phi_a.eval(-s); };

    const ChebPrefix g_a([&](double s) { return h_a.eval(s); }, 0.0, tau, h);
    const ChebPrefix g_b([&](double s) { return h_b.eval(s); }, 0.0, tau, h);
    const ChebPrefix q_tab([&](double s) { return i_a(s); }, 0.0, tau, h);
    const ChebPrefix p_tab([&](double s) { return i_a(s) * std::exp(I_UNIT * (-2.0 * eps * s)); },
                           0.0, tau, h);

    // term (iii): II A(t1-t2) A(t3-t4)
    const ChebPrefix t3_tab([&](double s) { return i_a(s) * g_a.eval(s); }, 0.0, tau, h);
    const cplx term_iii = t3_tab.total();

    // term (i): II B(t2-t3) A(t1-t4)
    const ChebPrefix t1_tab([&](double s) { return i_a(s) * g_b.eval(tau - s); }, 0.0, tau, h);
    const cplx term_i = t1_tab.total();

    // term (ii): II A(t1-t3) B(t2-t4) e^{-2 i eps (t3-t4)}, split against the
    // constant H_B(tau)
    const cplx hb_tau = h_b.total();
    const cplx p_tau = p_tab.total();
    const cplx q_tau = q_tab.total();
    const ChebPrefix part1(
        [&](double t4) {
            return (h_b.eval(tau - t4) - hb_tau) * std::exp(I_UNIT * (2.0 * eps * t4)) *
                   (p_tau - p_tab.eval(t4));
        },
        0.0, tau, h);
    const ChebPrefix part2(
        [&](double w) {
            return std::exp(I_UNIT * (-2.0 * eps * w)) * (hb_tau - h_b.eval(w)) *
                   (q_tau - q_tab.eval(w));
        },
        0.0, tau, h);
    const cplx term_ii = part1.total() + part2.total();

    return term_i + term_ii + term_iii;
}

} // namespace detail

// Second-order band-filter coefficients of the dissipative spin-boson model,
// per lambda^2.
inline RateCoefficients spin_boson_m(double tau, const SpinBosonParams& p) {
    p.validate();
    if (!(tau > 0.0)) throw domain_error("spin_boson_m: tau must be positive");
    if (p.coupling != SpinBosonCoupling::Dissipative)
        throw domain_error("spin_boson_m: defined for the dissipative coupling");
    RateCoefficients rc;
    rc.tau = tau;
    const double pref = tau * tau / (2.0 * M_PI);
    rc.m11 = -pref * detail::band_filter_integral(p.bath, p.eps_d, tau);
    rc.m14 = pref * detail::band_filter_integral(p.bath, -p.eps_d, tau);
    rc.m41 = -rc.m11;
    rc.m44 = -rc.m14;
    return rc;
}

// Fourth-order coefficients p11, p14 per lambda^4 (diagonal sector).
inline RateCoefficients spin_boson_p(double tau, const SpinBosonParams& p) {
    p.validate();
    if (!(tau > 0.0)) throw domain_error("spin_boson_p: tau must be positive");
    if (p.coupling != SpinBosonCoupling::Dissipative)
        throw domain_error("spin_boson_p: defined for the dissipative coupling");
    RateCoefficients rc = spin_boson_m(tau, p);
    rc.p11 = 2.0 * detail::spin_boson_p_complex(tau, p, p.eps_d).real();
    rc.p14 = -2.0 * detail::spin_boson_p_complex(tau, p, -p.eps_d).real();
    return rc;
}

// The interpolated diagonal solution rho_00^tau(tau).
inline double spin_boson_population(int order, double tau, const SpinBosonParams& p,
                                    double rho00_0) {
    if (order != 2 && order != 4) throw unsupported_error("spin_boson_population: order 2 or 4");
    if (rho00_0 < 0.0 || rho00_0 > 1.0)
        throw domain_error("spin_boson_population: rho00_0 in [0,1]");
    const double lam2 = p.lambda * p.lambda;
    double g11, g14; // exponent coefficients
    if (order == 2) {
        const auto rc = spin_boson_m(tau, p);
        g11 = lam2 * rc.m11.real();
        g14 = lam2 * rc.m14.real();
    } else {
        const auto rc = spin_boson_p(tau, p);
        const double m11 = rc.m11.real(), m14 = rc.m14.real();
        g11 = lam2 * m11 - lam2 * lam2 / 2.0 * (m11 * m11 - m11 * m14) +
              lam2 * lam2 * rc.p11.real();
        g14 = lam2 * m14 - lam2 * lam2 / 2.0 * (m11 * m14 - m14 * m14) +
              lam2 * lam2 * rc.p14.real();
    }
    const double e = std::exp(g11 - g14);
    return rho00_0 * e + (1.0 - e) / (1.0 - g11 / g14);
}

// ----------------------------- Fano coefficients -----------------------------

namespace detail {

// (e^{z tau} - 1 - z tau)/z^2, stable near z = 0
inline cplx double_exp_kernel(cplx z, double tau) {
    if (std::abs(z) * tau < 0.5) {
        // tau^2 sum_k (z tau)^k / (k+2)!
        cplx sum{0.0, 0.0}, zt{1.0, 0.0};
        double fact = 2.0;
        for (int k = 0; k <= 24; ++k) {
            sum += zt / fact;
            zt *= z * tau;
            fact *= (k + 3.0);
        }
        return tau * tau * sum;
    }
    return (std::exp(z * tau) - 1.0 - z * tau) / (z * z);
}

} // namespace detail

// Second-order coefficients per lambda^2, pure closed form.
inline RateCoefficients fano_m(double tau, const FanoParams& p) {
    p.validate();
    if (!(tau > 0.0)) throw domain_error("fano_m: tau must be positive");
    RateCoefficients rc;
    rc.tau = tau;
    const cplx zl{-p.leads.delta_l, p.leads.eps_l - p.eps_d};
    const cplx zr{-p.leads.delta_r, p.leads.eps_r - p.eps_d};
    const double gl = 0.5 * p.leads.gamma_l0 * p.leads.delta_l;
    const double gr = 0.5 * p.leads.gamma_r0 * p.leads.delta_r;
    rc.m11 = -2.0 * gl * detail::double_exp_kernel(zl, tau).real();
    rc.m14 = 2.0 * gr * detail::double_exp_kernel(zr, tau).real();
    rc.m41 = -rc.m11;
    rc.m44 = -rc.m14;
    return rc;
}

// Fourth-order coefficients per lambda^4, closed form through the
// exponential-simplex calculus (validated against the quadrature engine).
inline RateCoefficients fano_p(double tau, const FanoParams& p) {
    p.validate();
    if (!(tau > 0.0)) throw domain_error("fano_p: tau must be positive");
    RateCoefficients rc = fano_m(tau, p);
    const bath::BathModel leads = p.leads;

    // ordering chains of [Theta(t3-t2)Theta(t2-t1) + Theta(t2-t3)Theta(t3-t4)]:
    // descending chains (t3,t2,t1) with t4 free, then (t2,t3,t4) with t1 free.
    struct Chain {
        std::array<int, 3> chain;
        int free_var;
    };
    const std::array<Chain, 2> chains{{{{2, 1, 0}, 3}, {{1, 2, 3}, 0}}};

    auto coefficient = [&](const std::array<int, 4>& ops, double eps_sign) {
        cplx total{0.0, 0.0};
        std::vector<bath::CorrelationIndex> idx(4);
        for (int i = 0; i < 4; ++i) idx[i] = {ops[i], false};
        // phase e^{i eps_sign eps_d (t1 - t2 + t3 - t4)}
        const std::array<double, 4> phase_sign{1.0, -1.0, 1.0, -1.0};
        for (const auto& ch : chains) {
            for (const auto& ext : chain_interleavings(3, 1)) {
                // slot j holds chain var ext[j]: vars 0..2 -> chain, 3 -> free
                std::array<int, 4> slot_time{};
                for (int j = 0; j < 4; ++j)
                    slot_time[j] = ext[j] < 3 ? ch.chain[ext[j]] : ch.free_var;
                std::vector<int> rank(4);
                for (int j = 0; j < 4; ++j) rank[slot_time[j]] = j;
                for (const auto& ct : bath::corr_expsum(leads, idx, rank)) {
                    std::vector<cplx> nu(4);
                    for (int j = 0; j < 4; ++j) {
                        const int ti = slot_time[j];
                        nu[j] = ct.freq[ti] +
                                I_UNIT * (eps_sign * p.eps_d * phase_sign[ti]);
                    }
                    total += ct.coef * ordered_simplex_exp_integral(nu, tau);
                }
            }
        }
        return total;
    };

    rc.p11 = coefficient({0, 1, 0, 1}, -1.0);        // +C_1212 with e^{-i eps (...)}
    rc.p14 = -coefficient({1, 0, 1, 0}, 1.0);        // -C_2121 with e^{+i eps (...)}
    return rc;
}

// Diagonal DCG trajectory rho_00^tau(t); the coarse-graining point is t = tau.
inline double fano_dcg_population(int order, double tau, double t, const FanoParams& p,
                                  double rho00_0) {
    if (order != 2 && order != 4) throw unsupported_error("fano_dcg_population: order 2 or 4");
    if (!(tau > 0.0)) throw domain_error("fano_dcg_population: tau must be positive");
    if (t < 0.0) throw domain_error("fano_dcg_population: t must be nonnegative");
    const double lam2 = p.lambda * p.lambda;
    double g11, g14;
    if (order == 2) {
        const auto rc = fano_m(tau, p);
        g11 = lam2 * rc.m11.real();
        g14 = lam2 * rc.m14.real();
    } else {
        const auto rc = fano_p(tau, p);
        const double m11 = rc.m11.real(), m14 = rc.m14.real();
        g11 = lam2 * m11 - lam2 * lam2 / 2.0 * (m11 * m11 - m11 * m14) +
              lam2 * lam2 * rc.p11.real();
        g14 = lam2 * m14 - lam2 * lam2 / 2.0 * (m11 * m14 - m14 * m14) +
              lam2 * lam2 * rc.p14.real();
    }
    const double e = std::exp((g11 - g14) * t / tau);
    return rho00_0 * e + (1.0 - e) / (1.0 - g11 / g14);
}

// The Born-Markov solution; independent of the Lorentzian widths at fixed
// Gamma(eps_d).
inline double fano_bms_population(double t, const FanoParams& p, double rho00_0) {
    p.validate();
    if (t < 0.0) throw domain_error("fano_bms_population: t must be nonnegative");
    const double gl = bath::tunneling_rate(p.leads, bath::Lead::Left, p.eps_d);
    const double gr = bath::tunneling_rate(p.leads, bath::Lead::Right, p.eps_d);
    if (gl + gr <= 0.0) throw domain_error("fano_bms_population: degenerate rates");
    const double lam2 = p.lambda * p.lambda;
    const double e = std::exp(-lam2 * (gl + gr) * t);
    return gr / (gl + gr) * (1.0 - e) + rho00_0 * e;
}

} // namespace dcg::models
