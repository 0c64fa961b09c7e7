// lindblad.hpp — Second-order dampening matrix, Lamb shifts, positive
// semidefiniteness certification, and the Hamiltonian/dissipator split of a
// generator.

#pragma once

#include <string>
#include <vector>

#include "dcg/engine.hpp"

namespace dcg::lindblad {

using bath::BathModel;
using bath::CorrelationIndex;
using engine::QuadratureConfig;

// gamma_{ab,cd} indexed by row-major pairs (a*d + b), in the H_S eigenbasis
// (an already-diagonal H_S keeps its supplied order).
struct DampeningMatrix {
    std::size_t dim = 0;
    double tau = 0.0;
    ComplexMatrix entries;  // d^2 x d^2, per lambda^2

    cplx operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
        return entries(a * dim + b, c * dim + d);
    }
};

struct LambShift {
    int order = 1;
    double tau = 0.0;
    ComplexMatrix h_eff;  // per lambda^order
};

struct PsdReport {
    double min_eig = 0.0;
    bool is_psd = false;
    bool gershgorin_pass = false;
};

namespace detail {

inline void require_hermitian_couplings(const SystemSpec& sys) {
    for (const auto& c : sys.couplings)
        if (c.op.hermiticity_defect() > 1e-10 * std::max(1.0, c.op.max_abs()))
            throw domain_error(
                "non-Hermitian coupling operator; split into Hermitian and "
                "anti-Hermitian parts first (split_hermitian_couplings)");
}

} // namespace detail

// Split couplings and bath into the equivalent Hermitian-coupling form.
struct HermitianSplit {
    SystemSpec sys;
    BathModel bath;
};

inline HermitianSplit split_hermitian_couplings(const SystemSpec& sys, const BathModel& bathm) {
    auto sd = engine::detail::hermitian_split(sys, bathm);
    return {std::move(sd.sys), std::move(sd.bath)};
}

// ----------------------------- dampening matrix ------------------------------

// gamma_{ab,cd} = (1/tau) sum_{alpha beta} II [C_ab(t1,t2) - C_a(t1) C_b(t2)]
//                 <a|A_beta(t2)|b> <c|A_alpha(t1)|d>* dt1 dt2, per lambda^2.
inline DampeningMatrix dampening_matrix(double tau, const SystemSpec& sys, const BathModel& bathm,
                                        const QuadratureConfig& q = {}) {
    if (!(tau > 0.0)) throw domain_error("dampening_matrix: tau must be positive");
    sys.validate();
    detail::require_hermitian_couplings(sys);
    const auto frame = eigen_frame(sys.h_s);
    const int dim = static_cast<int>(sys.dim);
    const int n_ops = static_cast<int>(sys.couplings.size());

    std::vector<ComplexMatrix> aeig;
    for (const auto& c : sys.couplings) aeig.push_back(frame.to_frame(c.op));
    auto bohr = [&](int a, int b) { return frame.energies[a] - frame.energies[b]; };

    DampeningMatrix g;
    g.dim = sys.dim;
    g.tau = tau;
    g.entries = ComplexMatrix(sys.dim * sys.dim, sys.dim * sys.dim);

    for (int al = 0; al < n_ops; ++al)
        for (int be = 0; be < n_ops; ++be) {
            const CorrelationIndex ia{sys.couplings[al].bath_index, false};
            const CorrelationIndex ib{sys.couplings[be].bath_index, false};
            for (int a = 0; a < dim; ++a)
                for (int b = 0; b < dim; ++b) {
                    const cplx eb = aeig[be](a, b);
                    if (eb == cplx{0.0, 0.0}) continue;
                    for (int c = 0; c < dim; ++c)
                        for (int d = 0; d < dim; ++d) {
                            const cplx ea = std::conj(aeig[al](c, d));
                            if (ea == cplx{0.0, 0.0}) continue;
                            const double nu1 = -bohr(c, d);
                            const double nu2 = bohr(a, b);
                            cplx j = engine::detail::pair_integral(
                                bathm, ia, ib, nu1, nu2, tau, engine::detail::PairWeight::One, q);
                            j -= engine::detail::single_integral(bathm, ia, nu1, tau, q) *
                                 engine::detail::single_integral(bathm, ib, nu2, tau, q);
                            g.entries(a * dim + b, c * dim + d) += j * eb * ea / tau;
                        }
                }
        }
    return g;
}

// ------------------------------- Lamb shifts ---------------------------------

inline LambShift lamb_shift(int order, double tau, const SystemSpec& sys, const BathModel& bathm,
                            const QuadratureConfig& q = {}) {
    if (order != 1 && order != 2) throw unsupported_error("lamb_shift: order must be 1 or 2");
    if (!(tau > 0.0)) throw domain_error("lamb_shift: tau must be positive");
    sys.validate();
    detail::require_hermitian_couplings(sys);
    const auto frame = eigen_frame(sys.h_s);
    const int dim = static_cast<int>(sys.dim);
    const int n_ops = static_cast<int>(sys.couplings.size());

    std::vector<ComplexMatrix> aeig;
    for (const auto& c : sys.couplings) aeig.push_back(frame.to_frame(c.op));
    auto bohr = [&](int a, int b) { return frame.energies[a] - frame.energies[b]; };

    ComplexMatrix h(sys.dim, sys.dim);
    if (order == 1) {
        // (1/tau) sum_alpha int_0^tau C_alpha(t) A_alpha(t) dt
        for (int al = 0; al < n_ops; ++al) {
            const CorrelationIndex ia{sys.couplings[al].bath_index, false};
            for (int p = 0; p < dim; ++p)
                for (int r = 0; r < dim; ++r) {
                    const cplx el = aeig[al](p, r);
                    if (el == cplx{0.0, 0.0}) continue;
                    h(p, r) += el * engine::detail::single_integral(bathm, ia, bohr(p, r), tau, q) /
                               tau;
                }
        }
    } else {
        // (1/(2 tau i)) sum_{alpha beta} II C_ab(t1,t2) sgn(t1-t2)
        //               A_alpha(t1) A_beta(t2) dt1 dt2
        for (int al = 0; al < n_ops; ++al)
            for (int be = 0; be < n_ops; ++be) {
                const CorrelationIndex ia{sys.couplings[al].bath_index, false};
                const CorrelationIndex ib{sys.couplings[be].bath_index, false};
                for (int p = 0; p < dim; ++p)
                    for (int c = 0; c < dim; ++c)
                        for (int r = 0; r < dim; ++r) {
                            const cplx el = aeig[al](p, c) * aeig[be](c, r);
                            if (el == cplx{0.0, 0.0}) continue;
                            const cplx j = engine::detail::pair_integral(
                                bathm, ia, ib, bohr(p, c), bohr(c, r), tau,
                                engine::detail::PairWeight::Sgn, q);
                            h(p, r) += el * j / (2.0 * tau * I_UNIT);
                        }
            }
    }

    h = frame.from_frame(h);
    if (h.hermiticity_defect() > 1e-9 * std::max(1.0, h.max_abs()))
        throw numerical_error("lamb_shift: result not Hermitian within tolerance");
    // symmetrize away the residual
    ComplexMatrix herm = h + h.dagger();
    herm *= cplx{0.5, 0.0};
    return {order, tau, std::move(herm)};
}

// ------------------------------- certification -------------------------------

inline PsdReport certify_psd(const DampeningMatrix& g, double rel_floor = 1e-10) {
    const double scale = std::max(1.0, g.entries.max_abs());
    if (g.entries.hermiticity_defect() > 1e-10 * scale)
        throw domain_error("certify_psd: dampening matrix not Hermitian");
    const auto eig = eigen_hermitian(g.entries, 1e-8);
    double lo = eig.values.front(), hi = eig.values.front();
    for (double v : eig.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double norm = std::max(std::abs(lo), std::abs(hi));

    PsdReport rep;
    rep.min_eig = lo;
    rep.is_psd = lo >= -rel_floor * std::max(1e-300, norm);

    // Gershgorin bound: sufficient, not necessary
    double worst = 0.0;
    const std::size_t n = g.entries.rows();
    for (std::size_t i = 0; i < n; ++i) {
        double radius = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) radius += std::abs(g.entries(i, j));
        worst = std::min(worst, g.entries(i, i).real() - radius);
    }
    rep.gershgorin_pass = worst >= -rel_floor * std::max(1e-300, norm);
    return rep;
}

// --------------------------- generator decomposition -------------------------

struct GeneratorParts {
    ComplexMatrix h_part;  // traceless Hermitian
    ComplexMatrix gamma;   // d^2 x d^2 over the |a><b| jump basis
};

// -i[H, .] + sum gamma_{ab,cd} (E_ab rho E_dc - 1/2 {E_dc E_ab, rho})
inline Superoperator assemble_generator(const ComplexMatrix& h, const ComplexMatrix& gamma) {
    const std::size_t d = h.rows();
    Superoperator s(d);
    const auto id = ComplexMatrix::identity(d);
    s.matrix = cplx{0.0, -1.0} * (kron(h, id) - kron(id, h.transpose()));

    ComplexMatrix gmat(d, d);  // G = sum gamma_{ab,cd} E_dc E_ab = sum_a gamma_{(ab),(ad)} E_db
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            for (std::size_t c = 0; c < d; ++c)
                for (std::size_t e = 0; e < d; ++e) {
                    const cplx val = gamma(a * d + b, c * d + e);
                    if (val == cplx{0.0, 0.0}) continue;
                    s.matrix(a * d + c, b * d + e) += val;  // jump part
                    if (c == a) gmat(e, b) += val;
                }
    gmat *= cplx{0.5, 0.0};
    ComplexMatrix gt = gmat.transpose();
    s.matrix -= kron(gmat, id);
    s.matrix -= kron(id, gt);
    return s;
}

// Unique split of a Hermiticity- and trace-preserving generator into
// -i[H, .] plus a dissipator over the full |a><b| basis, with the gauge
// tr H = 0 and gamma orthogonal to the identity jump direction.
inline GeneratorParts decompose_generator(const Superoperator& l) {
    const std::size_t d = l.dim;
    const std::size_t n = d * d;
    const double scale = std::max(1.0, l.matrix.max_abs());

    for (std::size_t p = 0; p < d; ++p)
        for (std::size_t qq = 0; qq < d; ++qq)
            for (std::size_t r = 0; r < d; ++r)
                for (std::size_t ss = 0; ss < d; ++ss) {
                    const cplx lhs = l.matrix(p * d + qq, r * d + ss);
                    const cplx rhs = std::conj(l.matrix(qq * d + p, ss * d + r));
                    if (std::abs(lhs - rhs) > 1e-8 * scale)
                        throw domain_error(
                            "decompose_generator: map does not preserve hermiticity");
                }
    for (std::size_t col = 0; col < n; ++col) {
        cplx colsum{0.0, 0.0};
        for (std::size_t p = 0; p < d; ++p) colsum += l.matrix(p * d + p, col);
        if (std::abs(colsum) > 1e-8 * scale)
            throw domain_error("decompose_generator: map does not annihilate trace");
    }

    // reshuffle: c_{(p r),(q s)} = L_{(p q),(r s)}
    ComplexMatrix c(n, n);
    for (std::size_t p = 0; p < d; ++p)
        for (std::size_t qq = 0; qq < d; ++qq)
            for (std::size_t r = 0; r < d; ++r)
                for (std::size_t ss = 0; ss < d; ++ss)
                    c(p * d + r, qq * d + ss) = l.matrix(p * d + qq, r * d + ss);

    // project out the identity jump direction u_{(ab)} = delta_ab / sqrt(d)
    std::vector<cplx> u(n, cplx{0.0, 0.0});
    for (std::size_t a = 0; a < d; ++a) u[a * d + a] = 1.0 / std::sqrt(double(d));
    auto project = [&](ComplexMatrix& m) {
        // m <- (I - uu^dag) m (I - uu^dag)
        std::vector<cplx> mu(n, cplx{0.0, 0.0}), um(n, cplx{0.0, 0.0});
        cplx umu{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                mu[i] += m(i, j) * u[j];
                um[j] += std::conj(u[i]) * m(i, j);
            }
        for (std::size_t i = 0; i < n; ++i) umu += std::conj(u[i]) * mu[i];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                m(i, j) += -mu[i] * std::conj(u[j]) - u[i] * um[j] +
                           umu * u[i] * std::conj(u[j]);
    };
    ComplexMatrix gamma = c;
    project(gamma);

    // remainder must be of the form K rho + rho K^dag
    Superoperator diss = assemble_generator(ComplexMatrix(d, d), gamma);
    ComplexMatrix rem = l.matrix - diss.matrix;
    ComplexMatrix kmat(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            cplx acc{0.0, 0.0};
            for (std::size_t x = 0; x < d; ++x) acc += rem(i * d + x, j * d + x);
            kmat(i, j) = acc / double(d);
        }
    ComplexMatrix h = cplx{0.0, 0.5} * (kmat - kmat.dagger());
    const cplx tr = h.trace() / double(d);
    for (std::size_t i = 0; i < d; ++i) h(i, i) -= tr;

    const auto rebuilt = assemble_generator(h, gamma);
    if ((rebuilt.matrix - l.matrix).max_abs() > 1e-9 * scale)
        throw domain_error("decompose_generator: generator is not of Lindblad form");
    return {std::move(h), std::move(gamma)};
}

} // namespace dcg::lindblad
