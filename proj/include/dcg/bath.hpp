// bath.hpp — Analytic bath models and their multi-time correlation functions.
// The engine consumes baths through the free functions defined here; every
// model supplies plain numeric correlators, and models whose correlators are
// finite sums of exponentials additionally expose that structure for the
// exact integration paths.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "dcg/errors.hpp"
#include "dcg/matrix.hpp"
#include "dcg/quadrature.hpp"
#include "dcg/special_functions.hpp"

namespace dcg::bath {

// Which B operator, and whether it enters as the Hermitian conjugate
// (the overbar index).
struct CorrelationIndex {
    int op = 0;
    bool conjugated = false;
};

// One exponential term of a correlation function:
// coef * exp(sum_k freq[k] * t_k). freq entries beyond the order are unused.
struct CorrExpTerm {
    cplx coef;
    std::array<cplx, 4> freq{};
};

using CorrExpSum = std::vector<CorrExpTerm>;

// ----------------------------- model records --------------------------------

struct TwoSpinBath {
    enum class Coupling { Heisenberg, SingleSigmaZ };

    double Omega = 1.0;     // bath spin splitting, H_B = Omega sigma_z
    double rho_b00 = 0.5;   // initial bath population of |0>
    Coupling coupling = Coupling::Heisenberg;

    void validate() const {
        if (rho_b00 < 0.0 || rho_b00 > 1.0)
            throw domain_error("TwoSpinBath: rho_b00 must lie in [0,1]");
    }
};

struct BosonicBath {
    double g0 = 1.0;        // spectral density prefactor
    double s = 1.0;         // spectral exponent (ohmic = 1)
    double omega_c = 1.0;   // exponential cutoff
    double beta = 1.0;      // inverse temperature

    void validate() const {
        if (!(g0 >= 0.0) || !std::isfinite(g0)) throw domain_error("BosonicBath: bad g0");
        if (!(s > 0.0)) throw domain_error("BosonicBath: requires s > 0");
        if (!(omega_c > 0.0) || !std::isfinite(omega_c))
            throw domain_error("BosonicBath: bad omega_c");
        if (!(beta > 0.0) || !std::isfinite(beta)) throw domain_error("BosonicBath: bad beta");
    }
};

// Infinite-bias leads: left lead full, right lead empty. Operator 0 is the
// creation-side combination (t c^dag), operator 1 the annihilation side.
struct FermionLeads {
    double gamma_l0 = 1.0, gamma_r0 = 1.0;  // Lorentzian peak rates
    double delta_l = 1.0, delta_r = 1.0;    // Lorentzian widths
    double eps_l = 0.0, eps_r = 0.0;        // Lorentzian centers

    void validate() const {
        if (!(delta_l > 0.0) || !(delta_r > 0.0))
            throw domain_error("FermionLeads: widths must be strictly positive");
        if (gamma_l0 < 0.0 || gamma_r0 < 0.0)
            throw domain_error("FermionLeads: peak rates must be nonnegative");
    }
};

// Escape hatch for tests and oracles: correlators supplied as callables.
struct GenericBath {
    int op_count = 1;
    bool stationary = false;
    bool odd_orders_vanish = false;
    std::function<cplx(const std::vector<CorrelationIndex>&, const std::vector<double>&)> corr;
    // optional exponential structure; rank[i] is the descending-order rank of t_i
    std::function<CorrExpSum(const std::vector<CorrelationIndex>&, const std::vector<int>&)>
        corr_exp;
    // optional half Fourier transform for the BMS limit
    std::function<cplx(CorrelationIndex, CorrelationIndex, double)> half_fourier;
};

using BathModel = std::variant<TwoSpinBath, BosonicBath, FermionLeads, GenericBath>;

// ----------------------------- spectral inputs ------------------------------

inline double spectral_density(const BosonicBath& b, double w) {
    if (!(w > 0.0)) throw domain_error("spectral_density: requires w > 0");
    return b.g0 * std::pow(w, b.s) * std::exp(-w / b.omega_c);
}

enum class Lead { Left, Right };

inline double tunneling_rate(const FermionLeads& f, Lead side, double w) {
    const double g0 = side == Lead::Left ? f.gamma_l0 : f.gamma_r0;
    const double d = side == Lead::Left ? f.delta_l : f.delta_r;
    const double e = side == Lead::Left ? f.eps_l : f.eps_r;
    return g0 * d * d / ((w - e) * (w - e) + d * d);
}

// G(|w|) / |e^{beta w} - 1|, the full-line weight of the second-order
// bosonic correlation function.
inline double bosonic_band_weight(const BosonicBath& b, double w) {
    const double aw = std::abs(w);
    if (aw < 1e-300) return 0.0;
    const double denom = std::abs(std::expm1(b.beta * w));
    if (b.beta * aw < 1e-8) {
        // |e^{bw}-1| ~ beta |w|
        return b.g0 * std::pow(aw, b.s - 1.0) * std::exp(-aw / b.omega_c) / b.beta;
    }
    return b.g0 * std::pow(aw, b.s) * std::exp(-aw / b.omega_c) / denom;
}

// ------------------------- small-bath path summation -------------------------
// Exact multi-time correlators for a finite bath: H_B diagonalized once, the
// trace evaluated as a sum over index paths with phase factors. Provides both
// the numeric value and the exponential-sum structure.

struct SmallBathCorrelator {
    std::vector<double> energies;        // H_B eigenvalues (basis order)
    std::vector<ComplexMatrix> ops;      // B operators in the same basis
    ComplexMatrix rho;                   // initial bath state in the same basis

    cplx correlate(const std::vector<CorrelationIndex>& idx,
                   const std::vector<double>& times) const {
        cplx total{0.0, 0.0};
        for_each_path(idx, [&](cplx amp, const std::array<cplx, 4>& freq, std::size_t n) {
            cplx phase{0.0, 0.0};
            for (std::size_t k = 0; k < n; ++k) phase += freq[k] * times[k];
            total += amp * std::exp(phase);
        });
        return total;
    }

    CorrExpSum exp_sum(const std::vector<CorrelationIndex>& idx) const {
        CorrExpSum out;
        for_each_path(idx, [&](cplx amp, const std::array<cplx, 4>& freq, std::size_t) {
            out.push_back({amp, freq});
        });
        return out;
    }

  private:
    template <class Fn>
    void for_each_path(const std::vector<CorrelationIndex>& idx, Fn&& fn) const {
        const std::size_t d = energies.size();
        const std::size_t n = idx.size();
        std::vector<std::size_t> path(n + 1, 0);
        // path[k] = a_k; amplitude prod_k <a_{k-1}|B_k|a_k> e^{i(E_{a_{k-1}}-E_{a_k}) t_k}
        // closed by <a_n|rho|a_0>.
        const std::size_t total_paths = [&] {
            std::size_t p = 1;
            for (std::size_t k = 0; k <= n; ++k) p *= d;
            return p;
        }();
        for (std::size_t code = 0; code < total_paths; ++code) {
            std::size_t c = code;
            for (std::size_t k = 0; k <= n; ++k) {
                path[k] = c % d;
                c /= d;
            }
            cplx amp = rho(path[n], path[0]);
            if (amp == cplx{0.0, 0.0}) continue;
            std::array<cplx, 4> freq{};
            bool zero = false;
            for (std::size_t k = 1; k <= n; ++k) {
                const auto& b = ops[static_cast<std::size_t>(idx[k - 1].op)];
                const cplx el = idx[k - 1].conjugated ? std::conj(b(path[k], path[k - 1]))
                                                      : b(path[k - 1], path[k]);
                if (el == cplx{0.0, 0.0}) {
                    zero = true;
                    break;
                }
                amp *= el;
                freq[k - 1] = I_UNIT * (energies[path[k - 1]] - energies[path[k]]);
            }
            if (!zero) fn(amp, freq, n);
        }
    }
};

inline SmallBathCorrelator two_spin_correlator(const TwoSpinBath& b) {
    SmallBathCorrelator c;
    c.energies = {b.Omega, -b.Omega};
    if (b.coupling == TwoSpinBath::Coupling::Heisenberg)
        c.ops = {ops::sigma_x(), ops::sigma_y(), ops::sigma_z()};
    else
        c.ops = {ops::sigma_z()};
    c.rho = ComplexMatrix(2, 2);
    c.rho(0, 0) = b.rho_b00;
    c.rho(1, 1) = 1.0 - b.rho_b00;
    return c;
}

// GenericBath wrapper around a small bath with an arbitrary (possibly
// non-diagonal) initial state; used by oracles exercising [rho_B, H_B] != 0.
inline GenericBath generic_small_bath(SmallBathCorrelator corr, bool stationary) {
    GenericBath g;
    g.op_count = static_cast<int>(corr.ops.size());
    g.stationary = stationary;
    g.odd_orders_vanish = false;
    auto shared = std::make_shared<SmallBathCorrelator>(std::move(corr));
    g.corr = [shared](const std::vector<CorrelationIndex>& idx,
                      const std::vector<double>& times) { return shared->correlate(idx, times); };
    g.corr_exp = [shared](const std::vector<CorrelationIndex>& idx, const std::vector<int>&) {
        return shared->exp_sum(idx);
    };
    return g;
}

// ------------------------------ bosonic model -------------------------------

// C(dt) in closed form through Hurwitz zeta functions.
inline cplx bosonic_pair_corr(const BosonicBath& b, double dt) {
    const double q = 1.0 / (b.beta * b.omega_c);
    const double s1 = 1.0 + b.s;
    const cplx z1 = hurwitz_zeta(s1, cplx{q, dt / b.beta});
    const cplx z2 = hurwitz_zeta(s1, cplx{1.0 + q, -dt / b.beta});
    const double pref = b.g0 * std::tgamma(s1) / (2.0 * M_PI * std::pow(b.beta, s1));
    return pref * (z1 + z2);
}

// ------------------------------ fermionic model ------------------------------

// C_a(s) = (Gamma_a^0 delta_a / 2) e^{-|s| delta_a + i eps_a s}
inline cplx fermion_lead_corr(const FermionLeads& f, Lead side, double s) {
    const double g0 = side == Lead::Left ? f.gamma_l0 : f.gamma_r0;
    const double d = side == Lead::Left ? f.delta_l : f.delta_r;
    const double e = side == Lead::Left ? f.eps_l : f.eps_r;
    return 0.5 * g0 * d * std::exp(cplx{-std::abs(s) * d, e * s});
}

namespace detail {

inline int effective_fermion_index(CorrelationIndex i) {
    if (i.op < 0 || i.op > 1) throw domain_error("FermionLeads: operator index out of range");
    return i.conjugated ? 1 - i.op : i.op;
}

// effective pair correlator C_{ij}(t1, t2); zero unless the pair is balanced
inline cplx fermion_pair(const FermionLeads& f, int i, int j, double t1, double t2) {
    if (i == 0 && j == 1) return fermion_lead_corr(f, Lead::Left, t1 - t2);
    if (i == 1 && j == 0) return fermion_lead_corr(f, Lead::Right, t2 - t1);
    return {0.0, 0.0};
}

// exponential structure of C_{ij}(t_u, t_v) between argument slots u, v given
// the descending-order ranks of the times
inline std::optional<CorrExpTerm> fermion_pair_exp(const FermionLeads& f, int i, int j, int u,
                                                   int v, const std::vector<int>& rank) {
    Lead side;
    double sign_arg; // correlator argument is sign_arg * (t_u - t_v)
    if (i == 0 && j == 1) {
        side = Lead::Left;
        sign_arg = 1.0;
    } else if (i == 1 && j == 0) {
        side = Lead::Right;
        sign_arg = -1.0;
    } else {
        return std::nullopt;
    }
    const double g0 = side == Lead::Left ? f.gamma_l0 : f.gamma_r0;
    const double d = side == Lead::Left ? f.delta_l : f.delta_r;
    const double e = side == Lead::Left ? f.eps_l : f.eps_r;
    // |arg| resolves via the ordering: t_u > t_v iff rank[u] < rank[v]
    const double sgn_uv = rank[u] < rank[v] ? 1.0 : -1.0; // sign of (t_u - t_v)
    CorrExpTerm term;
    term.coef = 0.5 * g0 * d;
    term.freq[u] = cplx{-d * sgn_uv, e * sign_arg};
    term.freq[v] = -term.freq[u];
    return term;
}

// fermionic Wick: <1234> = <12><34> - <13><24> + <14><23>
inline const std::array<std::array<int, 4>, 3>& wick_pairings() {
    static const std::array<std::array<int, 4>, 3> p{{{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}}};
    return p;
}
inline constexpr double wick_signs[3] = {1.0, -1.0, 1.0};

} // namespace detail

// ------------------------------ general corr_n -------------------------------

inline int operator_count(const BathModel& m) {
    return std::visit(
        [](const auto& b) -> int {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, TwoSpinBath>)
                return b.coupling == TwoSpinBath::Coupling::Heisenberg ? 3 : 1;
            else if constexpr (std::is_same_v<T, BosonicBath>)
                return 1;
            else if constexpr (std::is_same_v<T, FermionLeads>)
                return 2;
            else
                return b.op_count;
        },
        m);
}

inline void check_indices(const BathModel& m, const std::vector<CorrelationIndex>& idx) {
    const int n_ops = operator_count(m);
    for (const auto& i : idx)
        if (i.op < 0 || i.op >= n_ops)
            throw domain_error("bath correlation: operator index out of range");
}

// Tr_B{ B_{i1}(t1) ... B_{in}(tn) rho_B^0 } with conjugation flags respected.
inline cplx corr_n(const BathModel& m, const std::vector<CorrelationIndex>& idx,
                   const std::vector<double>& times) {
    if (idx.size() != times.size() || idx.empty() || idx.size() > 4)
        throw dimension_error("corr_n: order must be 1..4 with matching times");
    check_indices(m, idx);
    const std::size_t n = idx.size();

    if (const auto* ts = std::get_if<TwoSpinBath>(&m)) {
        ts->validate();
        return two_spin_correlator(*ts).correlate(idx, times);
    }
    if (const auto* bb = std::get_if<BosonicBath>(&m)) {
        bb->validate();
        if (n % 2 == 1) return {0.0, 0.0};
        if (n == 2) return bosonic_pair_corr(*bb, times[0] - times[1]);
        // Wick sum: C(t2,t3)C(t1,t4) + C(t1,t3)C(t2,t4) + C(t1,t2)C(t3,t4)
        return bosonic_pair_corr(*bb, times[1] - times[2]) *
                   bosonic_pair_corr(*bb, times[0] - times[3]) +
               bosonic_pair_corr(*bb, times[0] - times[2]) *
                   bosonic_pair_corr(*bb, times[1] - times[3]) +
               bosonic_pair_corr(*bb, times[0] - times[1]) *
                   bosonic_pair_corr(*bb, times[2] - times[3]);
    }
    if (const auto* fl = std::get_if<FermionLeads>(&m)) {
        fl->validate();
        if (n % 2 == 1) return {0.0, 0.0};
        std::array<int, 4> eff{};
        for (std::size_t k = 0; k < n; ++k) eff[k] = detail::effective_fermion_index(idx[k]);
        if (n == 2) return detail::fermion_pair(*fl, eff[0], eff[1], times[0], times[1]);
        int balance = 0;
        for (std::size_t k = 0; k < n; ++k) balance += eff[k] == 0 ? 1 : -1;
        if (balance != 0) return {0.0, 0.0}; // particle-number selection rule
        cplx total{0.0, 0.0};
        const auto& pairings = detail::wick_pairings();
        for (int p = 0; p < 3; ++p) {
            const auto& pr = pairings[p];
            total += detail::wick_signs[p] *
                     detail::fermion_pair(*fl, eff[pr[0]], eff[pr[1]], times[pr[0]], times[pr[1]]) *
                     detail::fermion_pair(*fl, eff[pr[2]], eff[pr[3]], times[pr[2]], times[pr[3]]);
        }
        return total;
    }
    const auto& g = std::get<GenericBath>(m);
    if (!g.corr) throw unsupported_error("GenericBath: no correlator supplied");
    return g.corr(idx, times);
}

inline cplx corr1(const BathModel& m, CorrelationIndex i, double t1) {
    return corr_n(m, {i}, {t1});
}
inline cplx corr2(const BathModel& m, CorrelationIndex i, CorrelationIndex j, double t1,
                  double t2) {
    return corr_n(m, {i, j}, {t1, t2});
}
inline cplx corr3(const BathModel& m, CorrelationIndex i, CorrelationIndex j, CorrelationIndex k,
                  double t1, double t2, double t3) {
    return corr_n(m, {i, j, k}, {t1, t2, t3});
}
inline cplx corr4(const BathModel& m, CorrelationIndex i, CorrelationIndex j, CorrelationIndex k,
                  CorrelationIndex l, double t1, double t2, double t3, double t4) {
    return corr_n(m, {i, j, k, l}, {t1, t2, t3, t4});
}

// ------------------------------ capabilities --------------------------------

inline bool stationary(const BathModel& m) {
    return std::visit(
        [](const auto& b) -> bool {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, GenericBath>)
                return b.stationary;
            else
                return true; // the three analytic models are stationary in corr2
        },
        m);
}

inline bool odd_orders_vanish(const BathModel& m) {
    return std::visit(
        [](const auto& b) -> bool {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, BosonicBath> || std::is_same_v<T, FermionLeads>)
                return true;
            else if constexpr (std::is_same_v<T, GenericBath>)
                return b.odd_orders_vanish;
            else
                return false;
        },
        m);
}

inline bool exp_capable(const BathModel& m) {
    return std::visit(
        [](const auto& b) -> bool {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, TwoSpinBath> || std::is_same_v<T, FermionLeads>)
                return true;
            else if constexpr (std::is_same_v<T, GenericBath>)
                return static_cast<bool>(b.corr_exp);
            else
                return false;
        },
        m);
}

// Exponential-sum structure of corr_n; `rank[i]` gives the descending-order
// rank of t_i so models with |t_i - t_j| factors can resolve signs.
inline CorrExpSum corr_expsum(const BathModel& m, const std::vector<CorrelationIndex>& idx,
                              const std::vector<int>& rank) {
    check_indices(m, idx);
    const std::size_t n = idx.size();
    if (const auto* ts = std::get_if<TwoSpinBath>(&m)) return two_spin_correlator(*ts).exp_sum(idx);
    if (const auto* fl = std::get_if<FermionLeads>(&m)) {
        CorrExpSum out;
        if (n % 2 == 1) return out;
        std::array<int, 4> eff{};
        for (std::size_t k = 0; k < n; ++k) eff[k] = detail::effective_fermion_index(idx[k]);
        if (n == 2) {
            if (auto t = detail::fermion_pair_exp(*fl, eff[0], eff[1], 0, 1, rank)) out.push_back(*t);
            return out;
        }
        const auto& pairings = detail::wick_pairings();
        for (int p = 0; p < 3; ++p) {
            const auto& pr = pairings[p];
            const auto a = detail::fermion_pair_exp(*fl, eff[pr[0]], eff[pr[1]], pr[0], pr[1], rank);
            if (!a) continue;
            const auto b = detail::fermion_pair_exp(*fl, eff[pr[2]], eff[pr[3]], pr[2], pr[3], rank);
            if (!b) continue;
            CorrExpTerm t;
            t.coef = detail::wick_signs[p] * a->coef * b->coef;
            for (int k = 0; k < 4; ++k) t.freq[k] = a->freq[k] + b->freq[k];
            out.push_back(t);
        }
        return out;
    }
    if (const auto* g = std::get_if<GenericBath>(&m)) {
        if (g->corr_exp) return g->corr_exp(idx, rank);
        throw unsupported_error("GenericBath: no exponential correlator supplied");
    }
    throw unsupported_error("corr_expsum: bath has no exponential structure");
}

// ------------------------- Fourier data for the BMS limit --------------------

// Lambda_{ij}(nu) = int_0^inf C_{ij}(dt) e^{+i nu dt} d dt with
// C_{ij}(dt) := corr2(i, j, t+dt, t) for stationary baths.
inline cplx half_fourier(const BathModel& m, CorrelationIndex i, CorrelationIndex j, double nu) {
    if (const auto* fl = std::get_if<FermionLeads>(&m)) {
        const int a = detail::effective_fermion_index(i);
        const int b = detail::effective_fermion_index(j);
        if (a == 0 && b == 1)
            return 0.5 * fl->gamma_l0 * fl->delta_l / cplx{fl->delta_l, -(fl->eps_l + nu)};
        if (a == 1 && b == 0)
            return 0.5 * fl->gamma_r0 * fl->delta_r / cplx{fl->delta_r, fl->eps_r - nu};
        return {0.0, 0.0};
    }
    if (const auto* bb = std::get_if<BosonicBath>(&m)) {
        bb->validate();
        // Lambda(nu) = (1/2) Gt(-nu) + (i/2pi) PV int Gt(w)/(w + nu) dw
        const double w_max = std::max({40.0 / bb->beta, 20.0 * bb->omega_c, std::abs(nu) + 30.0});
        const double pole = -nu;
        const double g_at_pole = bosonic_band_weight(*bb, pole);
        auto integrand = [&](double w) -> cplx {
            const double num = bosonic_band_weight(*bb, w) - g_at_pole;
            const double den = w + nu;
            if (std::abs(den) < 1e-14) return {0.0, 0.0};
            return {num / den, 0.0};
        };
        std::vector<double> breaks{pole, 0.0, -1.0, 1.0, pole - 1.0, pole + 1.0};
        auto pv = adaptive_integrate(integrand, -w_max, w_max, {1e-11, 1e-10, 400000}, breaks);
        // the subtracted constant integrates to g_at_pole * log|(w_max+nu)/(w_max-nu)|
        const double log_term =
            g_at_pole * std::log(std::abs((w_max + nu) / (w_max - nu)));
        return 0.5 * g_at_pole + I_UNIT / (2.0 * M_PI) * (pv.value.real() + log_term);
    }
    if (const auto* g = std::get_if<GenericBath>(&m)) {
        if (g->half_fourier) return g->half_fourier(i, j, nu);
    }
    throw unsupported_error("half_fourier: not available for this bath model");
}

// Full Fourier transform W_{ij}(nu) = int C_{ij}(dt) e^{-i nu dt} d dt.
inline cplx full_fourier(const BathModel& m, CorrelationIndex i, CorrelationIndex j, double nu) {
    return half_fourier(m, i, j, -nu) + std::conj(half_fourier(m, j, i, -nu));
}

} // namespace dcg::bath
