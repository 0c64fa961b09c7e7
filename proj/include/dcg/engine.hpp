// engine.hpp — The generic coarse-graining machine: time-ordered perturbative
// superoperators T_n (n = 1..4), order-by-order extraction of the generator
// components L_n, interpolated propagation, and the infinite-graining limit.
//
// T_n integrands factor into bath correlation functions times products of
// interaction-picture coupling operators, summed over conjugation patterns.
// Each pattern constrains the times by two independent ordering chains; those
// partial orders are decomposed into full orderings, and every full ordering
// is integrated either exactly (correlators that are finite exponential sums),
// by a 1D stationary reduction (second order, stationary baths), or by
// tensor-product Gauss-Legendre on the unit-cube simplex map.

#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include "dcg/bath.hpp"
#include "dcg/expcalc.hpp"
#include "dcg/linalg.hpp"
#include "dcg/quadrature.hpp"
#include "dcg/system.hpp"

namespace dcg::engine {

using bath::BathModel;
using bath::CorrelationIndex;

struct QuadratureConfig {
    int nodes_2d = 32;
    int nodes_3d = 16;
    int nodes_4d = 12;
    double tol = 1e-9;
    bool force_generic = false;  // disable closed-form/stationary shortcuts

    void validate() const {
        if (nodes_2d < 4 || nodes_3d < 4 || nodes_4d < 4)
            throw domain_error("QuadratureConfig: nodes >= 4 required");
        if (!(tol > 0.0)) throw domain_error("QuadratureConfig: tol must be positive");
    }
    int nodes_for(int n) const {
        if (n <= 2) return nodes_2d;
        if (n == 3) return nodes_3d;
        return nodes_4d;
    }
};

// Theta(0) = 1/2 convention, used wherever step functions are evaluated
// pointwise.
inline double heaviside(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? 0.0 : 0.5); }

// The five-term step-function identity behind the fourth-order reductions;
// identically zero for all real arguments under the Theta(0) = 1/2 convention.
inline double heaviside_identity_check(double t1, double t2, double t3, double t4) {
    return heaviside(t4 - t3) * heaviside(t3 - t2) * heaviside(t2 - t1) +
           heaviside(t3 - t4) * heaviside(t2 - t1) +
           heaviside(t1 - t2) * heaviside(t2 - t3) * heaviside(t3 - t4) -
           heaviside(t2 - t3) * heaviside(t3 - t4) - heaviside(t3 - t2) * heaviside(t2 - t1);
}

namespace detail {

// One matrix-index path through a product of interaction-picture operators:
// the product contributes coef * e^{sum freq[ti] t_ti} E_{start,end}.
struct PathTerm {
    int start = 0, end = 0;
    cplx coef{1.0, 0.0};
    std::array<cplx, 4> freq{};
};

struct ProductFactor {
    const ComplexMatrix* op;
    bool daggered;
    int time_index;
};

inline void enumerate_paths(const std::vector<ProductFactor>& seq,
                            const std::vector<double>& energies, int dim,
                            std::vector<PathTerm>& out) {
    out.clear();
    if (seq.empty()) {
        for (int r = 0; r < dim; ++r) out.push_back({r, r, {1.0, 0.0}, {}});
        return;
    }
    std::vector<PathTerm> frontier;
    for (int r = 0; r < dim; ++r) frontier.push_back({r, r, {1.0, 0.0}, {}});
    for (const auto& factor : seq) {
        std::vector<PathTerm> next;
        next.reserve(frontier.size() * dim);
        for (const auto& p : frontier) {
            for (int r = 0; r < dim; ++r) {
                const cplx el = factor.daggered
                                    ? std::conj((*factor.op)(r, p.end))
                                    : (*factor.op)(p.end, r);
                if (el == cplx{0.0, 0.0}) continue;
                PathTerm q = p;
                q.end = r;
                q.coef *= el;
                q.freq[factor.time_index] += I_UNIT * (energies[p.end] - energies[r]);
                next.push_back(q);
            }
        }
        frontier = std::move(next);
    }
    out = std::move(frontier);
}

// Map a two-chain interleaving to time indices: barred chain t_1 < ... < t_k
// (descending variable order t_k, ..., t_1), free chain t_{k+1} > ... > t_n.
inline int time_index_of_chain_var(int var, int k) { return var < k ? k - 1 - var : var; }

struct NuKey {
    std::array<std::int64_t, 8> v{};
    bool operator==(const NuKey&) const = default;
};
struct NuKeyHash {
    std::size_t operator()(const NuKey& k) const {
        std::size_t h = 1469598103934665603ull;
        for (auto x : k.v) {
            h ^= static_cast<std::size_t>(x);
            h *= 1099511628211ull;
        }
        return h;
    }
};

class SimplexExpCache {
  public:
    cplx integral(const std::vector<cplx>& nu, double tau) {
        NuKey key;
        for (std::size_t j = 0; j < nu.size(); ++j) {
            key.v[2 * j] = quantize(nu[j].real());
            key.v[2 * j + 1] = quantize(nu[j].imag());
        }
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        const cplx val = ordered_simplex_exp_integral(nu, tau);
        cache_.emplace(key, val);
        return val;
    }

  private:
    static std::int64_t quantize(double x) { return std::llround(x * 1e9); }
    std::unordered_map<NuKey, cplx, NuKeyHash> cache_;
};

inline cplx ipow_minus_i(int n) {
    switch (n & 3) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, -1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, 1.0};
    }
}

// ----------------------------- exact path -----------------------------------

inline Superoperator compute_T_exact(int n, double tau, const SystemSpec& sys,
                                     const BathModel& bathm, const EigenFrame& frame) {
    const int dim = static_cast<int>(sys.dim);
    const int n_ops = static_cast<int>(sys.couplings.size());
    std::vector<ComplexMatrix> aeig;
    aeig.reserve(n_ops);
    for (const auto& c : sys.couplings) aeig.push_back(frame.to_frame(c.op));

    Superoperator s(sys.dim);
    SimplexExpCache cache;
    std::vector<PathTerm> lpaths, rpaths;
    std::vector<cplx> nu(n);

    for (int k = 0; k <= n; ++k) {
        const cplx coeff = ipow_minus_i(n) * (k % 2 ? -1.0 : 1.0);
        const auto extensions = chain_interleavings(k, n - k);

        std::vector<int> alpha(n, 0);
        while (true) {
            std::vector<CorrelationIndex> idx(n);
            for (int i = 0; i < n; ++i)
                idx[i] = {sys.couplings[alpha[i]].bath_index, i < k};

            std::vector<ProductFactor> rseq, lseq;
            for (int m = 0; m < k; ++m) rseq.push_back({&aeig[alpha[m]], true, m});
            for (int m = k; m < n; ++m) lseq.push_back({&aeig[alpha[m]], false, m});
            enumerate_paths(rseq, frame.energies, dim, rpaths);
            enumerate_paths(lseq, frame.energies, dim, lpaths);

            if (!rpaths.empty() && !lpaths.empty()) {
                for (const auto& ext : extensions) {
                    std::vector<int> rank(n);
                    for (int j = 0; j < n; ++j) rank[time_index_of_chain_var(ext[j], k)] = j;
                    const auto cterms = bath::corr_expsum(bathm, idx, rank);
                    for (const auto& ct : cterms) {
                        for (const auto& lp : lpaths) {
                            for (const auto& rp : rpaths) {
                                for (int j = 0; j < n; ++j) {
                                    const int ti = time_index_of_chain_var(ext[j], k);
                                    nu[j] = ct.freq[ti] + lp.freq[ti] + rp.freq[ti];
                                }
                                const cplx val = cache.integral(nu, tau);
                                if (val == cplx{0.0, 0.0}) continue;
                                s.matrix(lp.start * dim + rp.end, lp.end * dim + rp.start) +=
                                    coeff * ct.coef * lp.coef * rp.coef * val;
                            }
                        }
                    }
                }
            }

            int pos = n - 1;
            while (pos >= 0 && ++alpha[pos] == n_ops) alpha[pos--] = 0;
            if (pos < 0) break;
        }
    }
    s.matrix = frame.superop_from_frame(s.matrix);
    return s;
}

// --------------------------- quadrature path ---------------------------------

inline Superoperator compute_T_quadrature(int n, double tau, const SystemSpec& sys,
                                          const BathModel& bathm, const EigenFrame& frame,
                                          const QuadratureConfig& q) {
    const int dim = static_cast<int>(sys.dim);
    const int n_ops = static_cast<int>(sys.couplings.size());
    std::vector<ComplexMatrix> aeig;
    for (const auto& c : sys.couplings) aeig.push_back(frame.to_frame(c.op));

    const auto rule = gauss_legendre(q.nodes_for(n));
    const int nn = static_cast<int>(rule.nodes.size());

    Superoperator s(sys.dim);
    std::vector<double> times(n), svals(n);
    std::vector<int> node_ix(n, 0);
    std::vector<ComplexMatrix> phased(n_ops, ComplexMatrix(dim, dim));
    // phased operators per (op, time index)
    std::vector<std::vector<ComplexMatrix>> at(n_ops,
                                               std::vector<ComplexMatrix>(n, ComplexMatrix(dim, dim)));
    std::vector<CorrelationIndex> idx(n);

    for (int k = 0; k <= n; ++k) {
        const cplx coeff = ipow_minus_i(n) * (k % 2 ? -1.0 : 1.0);
        for (const auto& ext : chain_interleavings(k, n - k)) {
            std::fill(node_ix.begin(), node_ix.end(), 0);
            while (true) {
                // simplex map s_1 >= ... >= s_n via cumulative products
                double jac = tau;
                double weight = 1.0;
                for (int j = 0; j < n; ++j) {
                    const double u = 0.5 * (rule.nodes[node_ix[j]] + 1.0);
                    weight *= 0.5 * rule.weights[node_ix[j]];
                    svals[j] = (j == 0 ? tau : svals[j - 1]) * u;
                    if (j > 0) jac *= svals[j - 1];
                }
                for (int j = 0; j < n; ++j) times[time_index_of_chain_var(ext[j], k)] = svals[j];

                for (int a = 0; a < n_ops; ++a)
                    for (int ti = 0; ti < n; ++ti) {
                        auto& m = at[a][ti];
                        for (int p = 0; p < dim; ++p)
                            for (int r = 0; r < dim; ++r)
                                m(p, r) = aeig[a](p, r) *
                                          std::exp(I_UNIT * ((frame.energies[p] -
                                                              frame.energies[r]) *
                                                             times[ti]));
                    }

                std::vector<int> alpha(n, 0);
                while (true) {
                    for (int i = 0; i < n; ++i)
                        idx[i] = {sys.couplings[alpha[i]].bath_index, i < k};
                    const cplx c = bath::corr_n(bathm, idx, times);
                    if (std::abs(c) > 1e-300) {
                        ComplexMatrix left = ComplexMatrix::identity(dim);
                        for (int m = k; m < n; ++m) left = left * at[alpha[m]][m];
                        ComplexMatrix right = ComplexMatrix::identity(dim);
                        for (int m = 0; m < k; ++m) right = right * at[alpha[m]][m].dagger();
                        const cplx scale = coeff * c * weight * jac;
                        for (int a = 0; a < dim; ++a)
                            for (int b = 0; b < dim; ++b) {
                                const cplx lab = left(a, b);
                                if (lab == cplx{0.0, 0.0}) continue;
                                for (int x = 0; x < dim; ++x)
                                    for (int y = 0; y < dim; ++y)
                                        s.matrix(a * dim + x, b * dim + y) +=
                                            scale * lab * right(y, x);
                            }
                    }
                    int pos = n - 1;
                    while (pos >= 0 && ++alpha[pos] == n_ops) alpha[pos--] = 0;
                    if (pos < 0) break;
                }

                int pos = n - 1;
                while (pos >= 0 && ++node_ix[pos] == nn) node_ix[pos--] = 0;
                if (pos < 0) break;
            }
        }
    }
    s.matrix = frame.superop_from_frame(s.matrix);
    return s;
}

// ---------------------- pair integrals (order 2 kernels) ---------------------

enum class PairWeight { One, Sgn, ThetaFirst, ThetaSecond };

// int_0^tau int_0^tau C_{ij}(t1, t2) w(t1 - t2) e^{i(nu1 t1 + nu2 t2)} dt1 dt2
inline cplx pair_integral(const BathModel& bathm, CorrelationIndex i, CorrelationIndex j,
                          double nu1, double nu2, double tau, PairWeight w,
                          const QuadratureConfig& q) {
    const bool use_exact = !q.force_generic && bath::exp_capable(bathm);
    const bool use_stationary = !q.force_generic && bath::stationary(bathm);

    const double sign_plus = (w == PairWeight::ThetaSecond) ? 0.0 : 1.0;
    const double sign_minus = (w == PairWeight::ThetaFirst) ? 0.0
                              : (w == PairWeight::Sgn)      ? -1.0
                                                            : 1.0;

    if (use_exact) {
        cplx total{0.0, 0.0};
        // triangle t1 >= t2: slots (t1, t2); ranks t1:0, t2:1
        if (sign_plus != 0.0) {
            for (const auto& ct : bath::corr_expsum(bathm, {i, j}, {0, 1})) {
                total += sign_plus * ct.coef *
                         ordered_simplex_exp_integral(
                             {ct.freq[0] + I_UNIT * nu1, ct.freq[1] + I_UNIT * nu2}, tau);
            }
        }
        // triangle t2 >= t1: slots (t2, t1); ranks t1:1, t2:0
        if (sign_minus != 0.0) {
            for (const auto& ct : bath::corr_expsum(bathm, {i, j}, {1, 0})) {
                total += sign_minus * ct.coef *
                         ordered_simplex_exp_integral(
                             {ct.freq[1] + I_UNIT * nu2, ct.freq[0] + I_UNIT * nu1}, tau);
            }
        }
        return total;
    }

    if (use_stationary) {
        const double lo = (w == PairWeight::ThetaFirst) ? 0.0 : -tau;
        const double hi = (w == PairWeight::ThetaSecond) ? 0.0 : tau;
        auto f = [&](double dt) -> cplx {
            const double sgn_w = dt >= 0.0 ? sign_plus : sign_minus;
            if (sgn_w == 0.0) return {0.0, 0.0};
            const cplx c = bath::corr2(bathm, i, j, dt, 0.0);
            const double t2_lo = std::max(0.0, -dt);
            const double t2_hi = std::min(tau, tau - dt);
            return sgn_w * c * std::exp(I_UNIT * (nu1 * dt)) *
                   exp_segment_integral(I_UNIT * (nu1 + nu2), t2_lo, t2_hi);
        };
        auto res = adaptive_integrate(f, lo, hi, {q.tol * 1e-2, q.tol * 1e-2, 400000}, {0.0});
        return res.value;
    }

    // generic: Gauss-Legendre on the two ordering triangles
    const auto rule = gauss_legendre(q.nodes_2d);
    cplx total{0.0, 0.0};
    for (int tri = 0; tri < 2; ++tri) {
        const double sgn_w = tri == 0 ? sign_plus : sign_minus;
        if (sgn_w == 0.0) continue;
        for (std::size_t i1 = 0; i1 < rule.nodes.size(); ++i1)
            for (std::size_t i2 = 0; i2 < rule.nodes.size(); ++i2) {
                const double u1 = 0.5 * (rule.nodes[i1] + 1.0);
                const double u2 = 0.5 * (rule.nodes[i2] + 1.0);
                const double s1 = tau * u1, s2 = s1 * u2;
                const double jac = tau * s1;
                const double wgt = 0.25 * rule.weights[i1] * rule.weights[i2];
                const double t1 = tri == 0 ? s1 : s2;
                const double t2 = tri == 0 ? s2 : s1;
                total += sgn_w * wgt * jac * bath::corr2(bathm, i, j, t1, t2) *
                         std::exp(I_UNIT * (nu1 * t1 + nu2 * t2));
            }
    }
    return total;
}

// int_0^tau C_i(t) e^{i nu t} dt
inline cplx single_integral(const BathModel& bathm, CorrelationIndex i, double nu, double tau,
                            const QuadratureConfig& q) {
    if (!q.force_generic && bath::exp_capable(bathm)) {
        cplx total{0.0, 0.0};
        for (const auto& ct : bath::corr_expsum(bathm, {i}, {0}))
            total += ct.coef * exp_segment_integral(ct.freq[0] + I_UNIT * nu, 0.0, tau);
        return total;
    }
    const auto rule = gauss_legendre(q.nodes_2d);
    cplx total{0.0, 0.0};
    for (std::size_t m = 0; m < rule.nodes.size(); ++m) {
        const double t = 0.5 * tau * (rule.nodes[m] + 1.0);
        total += 0.5 * tau * rule.weights[m] * bath::corr1(bathm, i, t) *
                 std::exp(I_UNIT * (nu * t));
    }
    return total;
}

// ----------------------- stationary second order -----------------------------

inline Superoperator compute_T2_stationary(double tau, const SystemSpec& sys,
                                           const BathModel& bathm, const EigenFrame& frame,
                                           const QuadratureConfig& q) {
    const int dim = static_cast<int>(sys.dim);
    const int n_ops = static_cast<int>(sys.couplings.size());
    std::vector<ComplexMatrix> aeig;
    for (const auto& c : sys.couplings) aeig.push_back(frame.to_frame(c.op));

    Superoperator s(sys.dim);
    std::vector<PathTerm> lpaths, rpaths;
    std::map<std::array<std::int64_t, 7>, cplx> cache;

    const PairWeight weights[3] = {PairWeight::ThetaFirst, PairWeight::One,
                                   PairWeight::ThetaSecond};
    for (int k = 0; k <= 2; ++k) {
        const cplx coeff = ipow_minus_i(2) * (k % 2 ? -1.0 : 1.0);
        const PairWeight w = weights[k];
        for (int a1 = 0; a1 < n_ops; ++a1)
            for (int a2 = 0; a2 < n_ops; ++a2) {
                const CorrelationIndex i{sys.couplings[a1].bath_index, k >= 1};
                const CorrelationIndex j{sys.couplings[a2].bath_index, k >= 2};
                std::vector<ProductFactor> rseq, lseq;
                if (k >= 1) rseq.push_back({&aeig[a1], true, 0});
                if (k >= 2) rseq.push_back({&aeig[a2], true, 1});
                if (k < 1) lseq.push_back({&aeig[a1], false, 0});
                if (k < 2) lseq.push_back({&aeig[a2], false, 1});
                enumerate_paths(rseq, frame.energies, dim, rpaths);
                enumerate_paths(lseq, frame.energies, dim, lpaths);
                for (const auto& lp : lpaths)
                    for (const auto& rp : rpaths) {
                        const double nu1 = (lp.freq[0] + rp.freq[0]).imag();
                        const double nu2 = (lp.freq[1] + rp.freq[1]).imag();
                        std::array<std::int64_t, 7> key{int64_t(k),
                                                        int64_t(i.op),
                                                        int64_t(i.conjugated),
                                                        int64_t(j.op),
                                                        int64_t(j.conjugated),
                                                        std::llround(nu1 * 1e9),
                                                        std::llround(nu2 * 1e9)};
                        auto it = cache.find(key);
                        cplx val;
                        if (it != cache.end()) {
                            val = it->second;
                        } else {
                            val = pair_integral(bathm, i, j, nu1, nu2, tau, w, q);
                            cache.emplace(key, val);
                        }
                        s.matrix(lp.start * dim + rp.end, lp.end * dim + rp.start) +=
                            coeff * lp.coef * rp.coef * val;
                    }
            }
    }
    s.matrix = frame.superop_from_frame(s.matrix);
    return s;
}

} // namespace detail

// ------------------------------- compute_T -----------------------------------

// The superoperator T_n^tau acting on vectorized states (lambda powers are
// applied by the caller).
inline Superoperator compute_T(int n, double tau, const SystemSpec& sys, const BathModel& bathm,
                               const QuadratureConfig& q = {}) {
    if (n < 1 || n > 4) throw unsupported_error("compute_T: order must be 1..4");
    if (!(tau > 0.0)) throw domain_error("compute_T: tau must be positive");
    sys.validate();
    q.validate();
    const auto frame = eigen_frame(sys.h_s);

    if ((n % 2 == 1) && bath::odd_orders_vanish(bathm)) return Superoperator(sys.dim);
    if (!q.force_generic && bath::exp_capable(bathm))
        return detail::compute_T_exact(n, tau, sys, bathm, frame);
    if (!q.force_generic && n == 2 && bath::stationary(bathm))
        return detail::compute_T2_stationary(tau, sys, bathm, frame, q);
    return detail::compute_T_quadrature(n, tau, sys, bathm, frame, q);
}

// ------------------------------- extract_L -----------------------------------

// Order-by-order solution of the matching conditions at t = tau.
inline std::vector<Superoperator> extract_L(int order, double tau,
                                            const std::vector<Superoperator>& t_list) {
    if (order < 1 || order > 4) throw unsupported_error("extract_L: order must be 1..4");
    if (static_cast<int>(t_list.size()) < order)
        throw domain_error("extract_L: missing lower-order T superoperators");
    const double t2 = tau * tau, t3 = t2 * tau, t4 = t3 * tau;

    std::vector<Superoperator> l;
    l.reserve(order);
    auto scaled = [&](const ComplexMatrix& m, double f) {
        ComplexMatrix r = m;
        r *= cplx{f, 0.0};
        return r;
    };

    // L1 = T1 / tau
    {
        Superoperator l1 = t_list[0];
        l1.matrix *= cplx{1.0 / tau, 0.0};
        l.push_back(l1);
    }
    if (order >= 2) {
        Superoperator l2 = t_list[1];
        l2.matrix -= scaled(l[0].matrix * l[0].matrix, t2 / 2.0);
        l2.matrix *= cplx{1.0 / tau, 0.0};
        l.push_back(l2);
    }
    if (order >= 3) {
        Superoperator l3 = t_list[2];
        l3.matrix -= scaled(l[0].matrix * l[1].matrix + l[1].matrix * l[0].matrix, t2 / 2.0);
        l3.matrix -= scaled(l[0].matrix * l[0].matrix * l[0].matrix, t3 / 6.0);
        l3.matrix *= cplx{1.0 / tau, 0.0};
        l.push_back(l3);
    }
    if (order >= 4) {
        Superoperator l4 = t_list[3];
        l4.matrix -= scaled(l[0].matrix * l[2].matrix + l[1].matrix * l[1].matrix +
                                l[2].matrix * l[0].matrix,
                            t2 / 2.0);
        l4.matrix -= scaled(l[0].matrix * l[0].matrix * l[1].matrix +
                                l[0].matrix * l[1].matrix * l[0].matrix +
                                l[1].matrix * l[0].matrix * l[0].matrix,
                            t3 / 6.0);
        l4.matrix -= scaled(l[0].matrix * l[0].matrix * l[0].matrix * l[0].matrix, t4 / 24.0);
        l4.matrix *= cplx{1.0 / tau, 0.0};
        l.push_back(l4);
    }
    return l;
}

// ----------------------------- generator bundle ------------------------------

struct GrainedGenerator {
    double tau = 0.0;
    int order = 0;
    std::vector<Superoperator> components;  // L_1 .. L_order (per lambda^n)
    Superoperator assembled;                // sum_n lambda^n L_n
};

inline GrainedGenerator build_generator(const SystemSpec& sys, const BathModel& bathm, int order,
                                        double tau, const QuadratureConfig& q = {}) {
    std::vector<Superoperator> t_list;
    for (int n = 1; n <= order; ++n) t_list.push_back(compute_T(n, tau, sys, bathm, q));
    GrainedGenerator g;
    g.tau = tau;
    g.order = order;
    g.components = extract_L(order, tau, t_list);
    g.assembled = Superoperator(sys.dim);
    double lam = 1.0;
    for (int n = 1; n <= order; ++n) {
        lam *= sys.lambda;
        ComplexMatrix part = g.components[n - 1].matrix;
        part *= cplx{lam, 0.0};
        g.assembled.matrix += part;
    }
    return g;
}

// ------------------------------- propagation ---------------------------------

inline constexpr double kMinGrainTime = 1e-6;

// rho_bar(t) = exp(L^t t) rho0 in the interaction picture, one fresh
// generator per grid point.
inline std::vector<DensityMatrix> dcg_propagate(const SystemSpec& sys, const BathModel& bathm,
                                                int order, const DensityMatrix& rho0,
                                                const std::vector<double>& t_grid,
                                                const QuadratureConfig& q = {}) {
    sys.validate();
    if (rho0.dim() != sys.dim) throw dimension_error("dcg_propagate: rho0 dimension mismatch");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (t_grid[i] < 0.0) throw domain_error("dcg_propagate: negative time");
        if (i > 0 && t_grid[i] < t_grid[i - 1])
            throw domain_error("dcg_propagate: t_grid must be sorted");
    }

    std::vector<DensityMatrix> out;
    out.reserve(t_grid.size());
    const auto v0 = vectorize(rho0.matrix());
    for (double t : t_grid) {
        if (t == 0.0) {
            out.push_back(rho0);
            continue;
        }
        const double tau = std::max(t, kMinGrainTime);
        const auto gen = build_generator(sys, bathm, order, tau, q);
        ComplexMatrix lt = gen.assembled.matrix;
        lt *= cplx{t, 0.0};
        const auto propagator = matrix_exponential(lt);
        std::vector<cplx> v(v0.size(), cplx{0.0, 0.0});
        for (std::size_t r = 0; r < v.size(); ++r)
            for (std::size_t c = 0; c < v.size(); ++c) v[r] += propagator(r, c) * v0[c];
        ComplexMatrix rho = devectorize(v);
        const double trace_dev = std::abs(rho.trace() - cplx{1.0, 0.0});
        if (trace_dev > 1e-6)
            throw numerical_error("dcg_propagate: trace deviation " + std::to_string(trace_dev) +
                                  " at t = " + std::to_string(t));
        out.emplace_back(std::move(rho), Tolerances{1e-7, 1e-6, -1e-6});
    }
    return out;
}

// ------------------------------ BMS generator --------------------------------

namespace detail {

// Split every coupling into Hermitian and anti-Hermitian parts, rewriting the
// bath correlators accordingly. The returned bath's conjugation flags are
// no-ops (all split operators are Hermitian).
struct SplitWeight {
    int orig_op;
    cplx w_plain, w_bar;
};

struct SplitData {
    SystemSpec sys;
    BathModel bath;
};

inline SplitData hermitian_split(const SystemSpec& sys, const BathModel& bathm) {
    auto weights = std::make_shared<std::vector<SplitWeight>>();
    SystemSpec out;
    out.dim = sys.dim;
    out.h_s = sys.h_s;
    out.lambda = sys.lambda;

    for (const auto& c : sys.couplings) {
        ComplexMatrix ah = c.op + c.op.dagger();
        ah *= cplx{0.5, 0.0};
        ComplexMatrix aa = c.op - c.op.dagger();
        aa *= cplx{0.0, 0.5}; // i (A - A^dag)/2
        if (ah.max_abs() > 1e-14) {
            out.couplings.push_back({ah, static_cast<int>(weights->size())});
            weights->push_back({c.bath_index, cplx{0.5, 0.0}, cplx{0.5, 0.0}});
        }
        if (aa.max_abs() > 1e-14) {
            out.couplings.push_back({aa, static_cast<int>(weights->size())});
            weights->push_back({c.bath_index, cplx{0.0, -0.5}, cplx{0.0, 0.5}});
        }
    }
    if (out.couplings.empty()) throw domain_error("hermitian_split: all couplings vanish");

    auto base = std::make_shared<BathModel>(bathm);

    bath::GenericBath g;
    g.op_count = static_cast<int>(weights->size());
    g.stationary = bath::stationary(bathm);
    g.odd_orders_vanish = bath::odd_orders_vanish(bathm);

    g.corr = [weights, base](const std::vector<CorrelationIndex>& idx,
                             const std::vector<double>& times) -> cplx {
        const std::size_t n = idx.size();
        cplx total{0.0, 0.0};
        std::vector<CorrelationIndex> sub(n);
        for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
            cplx w{1.0, 0.0};
            for (std::size_t m = 0; m < n; ++m) {
                const auto& sw = (*weights)[idx[m].op];
                const bool bar = (mask >> m) & 1;
                w *= bar ? sw.w_bar : sw.w_plain;
                sub[m] = {sw.orig_op, bar};
            }
            total += w * bath::corr_n(*base, sub, times);
        }
        return total;
    };
    if (bath::exp_capable(bathm)) {
        g.corr_exp = [weights, base](const std::vector<CorrelationIndex>& idx,
                                     const std::vector<int>& rank) -> bath::CorrExpSum {
            const std::size_t n = idx.size();
            bath::CorrExpSum out_terms;
            std::vector<CorrelationIndex> sub(n);
            for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
                cplx w{1.0, 0.0};
                for (std::size_t m = 0; m < n; ++m) {
                    const auto& sw = (*weights)[idx[m].op];
                    const bool bar = (mask >> m) & 1;
                    w *= bar ? sw.w_bar : sw.w_plain;
                    sub[m] = {sw.orig_op, bar};
                }
                for (auto t : bath::corr_expsum(*base, sub, rank)) {
                    t.coef *= w;
                    out_terms.push_back(t);
                }
            }
            return out_terms;
        };
    }
    g.half_fourier = [weights, base](CorrelationIndex i, CorrelationIndex j, double nu) -> cplx {
        cplx total{0.0, 0.0};
        const auto& wi = (*weights)[i.op];
        const auto& wj = (*weights)[j.op];
        for (int b1 = 0; b1 < 2; ++b1)
            for (int b2 = 0; b2 < 2; ++b2)
                total += (b1 ? wi.w_bar : wi.w_plain) * (b2 ? wj.w_bar : wj.w_plain) *
                         bath::half_fourier(*base, {wi.orig_op, b1 == 1}, {wj.orig_op, b2 == 1},
                                            nu);
        return total;
    };

    SplitData sd;
    sd.sys = std::move(out);
    sd.bath = std::move(g);
    return sd;
}

} // namespace detail

// The tau -> infinity generator: secular pairing of Bohr frequencies with
// rates and level shifts from the (half) Fourier transforms of the
// second-order correlation functions. Requires a stationary bath with
// vanishing first-order correlations.
inline Superoperator bms_liouvillian(const SystemSpec& sys, const BathModel& bathm) {
    sys.validate();
    if (std::holds_alternative<bath::TwoSpinBath>(bathm))
        throw unsupported_error(
            "bms_liouvillian: finite bath correlations do not decay; no Markovian limit");
    if (!bath::stationary(bathm))
        throw unsupported_error("bms_liouvillian: bath must be stationary");

    // first-order correlations must vanish for the secular limit used here
    for (const auto& c : sys.couplings)
        for (double t : {0.0, 0.37, 1.9})
            if (std::abs(bath::corr1(bathm, {c.bath_index, false}, t)) > 1e-12)
                throw unsupported_error("bms_liouvillian: nonzero first-order correlations");

    const auto split = detail::hermitian_split(sys, bathm);
    const auto frame = eigen_frame(sys.h_s);
    const int dim = static_cast<int>(sys.dim);
    const int n_ops = static_cast<int>(split.sys.couplings.size());

    std::vector<ComplexMatrix> aeig;
    for (const auto& c : split.sys.couplings) aeig.push_back(frame.to_frame(c.op));

    double escale = 1.0;
    for (double e : frame.energies) escale = std::max(escale, std::abs(e));
    const double ftol = 1e-9 * escale;
    auto bohr = [&](int a, int b) { return frame.energies[a] - frame.energies[b]; };

    // cache of Lambda and W values per (alpha, beta, nu)
    std::map<std::array<std::int64_t, 3>, cplx> half_cache;
    auto half = [&](int a, int b, double nu) {
        std::array<std::int64_t, 3> key{a, b, std::llround(nu / escale * 1e12)};
        auto it = half_cache.find(key);
        if (it != half_cache.end()) return it->second;
        const cplx v = bath::half_fourier(split.bath, {a, false}, {b, false}, nu);
        half_cache.emplace(key, v);
        return v;
    };
    auto full = [&](int a, int b, double nu) { return half(a, b, -nu) + std::conj(half(b, a, -nu)); };

    const double lam2 = sys.lambda * sys.lambda;
    Superoperator s(sys.dim);

    // jump part: secular pairs (ab), (cd) with matching Bohr frequencies
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
            for (int c = 0; c < dim; ++c)
                for (int d = 0; d < dim; ++d) {
                    if (std::abs(bohr(a, b) - bohr(c, d)) > ftol) continue;
                    cplx rate{0.0, 0.0};
                    for (int al = 0; al < n_ops; ++al)
                        for (int be = 0; be < n_ops; ++be) {
                            const cplx el = aeig[be](a, b) * std::conj(aeig[al](c, d));
                            if (el == cplx{0.0, 0.0}) continue;
                            rate += full(al, be, bohr(a, b)) * el;
                        }
                    if (rate != cplx{0.0, 0.0})
                        s.matrix(a * dim + c, b * dim + d) += lam2 * rate;
                }

    // no-jump part: P_{ab} = delta_{E_a,E_b} sum_c Lambda_{ab}(w_ac) A_ac A_cb
    ComplexMatrix p(dim, dim);
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
            if (std::abs(bohr(a, b)) > ftol) continue;
            cplx acc{0.0, 0.0};
            for (int c = 0; c < dim; ++c)
                for (int al = 0; al < n_ops; ++al)
                    for (int be = 0; be < n_ops; ++be) {
                        const cplx el = aeig[al](a, c) * aeig[be](c, b);
                        if (el == cplx{0.0, 0.0}) continue;
                        acc += half(al, be, bohr(a, c)) * el;
                    }
            p(a, b) = acc;
        }
    ComplexMatrix pconj = p;
    for (auto& z : pconj.data()) z = std::conj(z);
    s.matrix -= cplx{lam2, 0.0} * kron(p, ComplexMatrix::identity(dim));
    s.matrix -= cplx{lam2, 0.0} * kron(ComplexMatrix::identity(dim), pconj);

    s.matrix = frame.superop_from_frame(s.matrix);
    return s;
}

} // namespace dcg::engine
