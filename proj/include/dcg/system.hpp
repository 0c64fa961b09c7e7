// system.hpp — System Hamiltonian, coupling list, and interaction picture

#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "dcg/linalg.hpp"

namespace dcg {

// System side of H = H_S + H_SB + H_B with H_SB = lambda sum_a A_a (x) B_a.
struct SystemSpec {
    struct Coupling {
        ComplexMatrix op;   // A_alpha
        int bath_index = 0; // which B_alpha it multiplies
    };

    std::size_t dim = 0;
    ComplexMatrix h_s;
    std::vector<Coupling> couplings;
    double lambda = 0.0;

    void validate() const {
        if (dim == 0 || h_s.rows() != dim || h_s.cols() != dim)
            throw dimension_error("SystemSpec: H_S shape does not match dim");
        if (h_s.hermiticity_defect() > 1e-10 * std::max(1.0, h_s.max_abs()))
            throw domain_error("SystemSpec: H_S not Hermitian within tolerance");
        if (couplings.empty()) throw domain_error("SystemSpec: couplings must be non-empty");
        for (const auto& c : couplings)
            if (c.op.rows() != dim || c.op.cols() != dim)
                throw dimension_error("SystemSpec: coupling operator shape mismatch");
        if (lambda < 0.0) throw domain_error("SystemSpec: lambda must be nonnegative");
    }
};

// Eigenbasis of H_S. An already-diagonal H_S keeps the supplied basis order,
// so matrix-element labels match the conventional model bases; otherwise the
// basis is sorted by ascending eigenvalue (original index breaking ties).
struct EigenFrame {
    std::vector<double> energies;
    ComplexMatrix vectors;  // columns are eigenvectors; identity if already diagonal
    bool is_identity = true;

    ComplexMatrix to_frame(const ComplexMatrix& a) const {
        if (is_identity) return a;
        return vectors.dagger() * a * vectors;
    }
    ComplexMatrix from_frame(const ComplexMatrix& a) const {
        if (is_identity) return a;
        return vectors * a * vectors.dagger();
    }
    // Superoperator basis change back to the original basis, row-major vec.
    ComplexMatrix superop_from_frame(const ComplexMatrix& s) const {
        if (is_identity) return s;
        ComplexMatrix vconj = vectors;
        for (auto& z : vconj.data()) z = std::conj(z);
        return kron(vectors, vconj) * s * kron(vectors.dagger(), vectors.transpose());
    }
};

inline EigenFrame eigen_frame(const ComplexMatrix& h_s) {
    const std::size_t d = h_s.rows();
    double offdiag = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (i != j) offdiag = std::max(offdiag, std::abs(h_s(i, j)));
    EigenFrame frame;
    if (offdiag <= 1e-12 * std::max(1.0, h_s.max_abs())) {
        frame.is_identity = true;
        frame.vectors = ComplexMatrix::identity(d);
        frame.energies.resize(d);
        for (std::size_t i = 0; i < d; ++i) frame.energies[i] = h_s(i, i).real();
        return frame;
    }
    const auto eig = eigen_hermitian(h_s, 1e-8, true);
    frame.is_identity = false;
    frame.vectors = eig.vectors;
    frame.energies = eig.values;
    return frame;
}

// e^{+i H_S t} A e^{-i H_S t}
inline ComplexMatrix interaction_picture_op(const ComplexMatrix& h_s, const ComplexMatrix& a,
                                            double t) {
    if (h_s.hermiticity_defect() > 1e-10 * std::max(1.0, h_s.max_abs()))
        throw domain_error("interaction_picture_op: H_S not Hermitian");
    if (a.rows() != h_s.rows() || a.cols() != h_s.cols())
        throw dimension_error("interaction_picture_op: shape mismatch");
    const auto frame = eigen_frame(h_s);
    ComplexMatrix in_frame = frame.to_frame(a);
    const std::size_t d = h_s.rows();
    for (std::size_t p = 0; p < d; ++p)
        for (std::size_t q = 0; q < d; ++q)
            in_frame(p, q) *= std::exp(I_UNIT * ((frame.energies[p] - frame.energies[q]) * t));
    return frame.from_frame(in_frame);
}

} // namespace dcg
