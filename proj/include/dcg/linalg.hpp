// linalg.hpp — Matrix exponential, Hermitian eigensolver, partial trace,
// vectorization, and the validated quantum state / superoperator types

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "dcg/matrix.hpp"

namespace dcg {

// Default validation tolerances; every check that uses them takes an
// optional override.
struct Tolerances {
    double hermiticity = 1e-10;
    double trace = 1e-10;
    double positivity_floor = -1e-8;
};

// ------------------------------ exponential ---------------------------------

// exp(A) by scaling-and-squaring with a truncated Taylor series; the scaling
// count is chosen so the scaled Frobenius norm is <= 0.5.
inline ComplexMatrix matrix_exponential(const ComplexMatrix& a) {
    if (!a.square()) throw dimension_error("matrix_exponential: matrix not square");
    if (!a.all_finite()) throw domain_error("matrix_exponential: non-finite entries");
    const std::size_t n = a.rows();

    int squarings = 0;
    double norm = a.frobenius_norm();
    while (norm > 0.5 && squarings < 64) {
        norm *= 0.5;
        ++squarings;
    }
    ComplexMatrix scaled = a;
    scaled *= cplx{std::ldexp(1.0, -squarings), 0.0};

    ComplexMatrix result = ComplexMatrix::identity(n);
    ComplexMatrix term = ComplexMatrix::identity(n);
    for (int k = 1; k <= 40; ++k) {
        term = term * scaled;
        term *= cplx{1.0 / k, 0.0};
        result += term;
        if (term.frobenius_norm() <= 1e-18 * std::max(1.0, result.frobenius_norm())) break;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

// ------------------------------ eigensolver ----------------------------------

struct HermitianEigen {
    std::vector<double> values;   // eigenvalues, order matches columns of vectors
    ComplexMatrix vectors;        // unitary; column k is the k-th eigenvector
};

// Cyclic Jacobi on the Hermitian part. Adequate for d <= 16.
// If `sort_ascending` the eigenpairs are ordered by ascending eigenvalue with
// the original index as tie-break; otherwise the natural Jacobi order is kept.
inline HermitianEigen eigen_hermitian(const ComplexMatrix& h, double tol = 1e-8,
                                      bool sort_ascending = true) {
    if (!h.square()) throw dimension_error("eigen_hermitian: matrix not square");
    const double scale = std::max(1.0, h.max_abs());
    if (h.hermiticity_defect() > tol * scale)
        throw domain_error("eigen_hermitian: matrix not Hermitian within tolerance");
    const std::size_t n = h.rows();

    // Work on the exactly Hermitian part.
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = 0.5 * (h(i, j) + std::conj(h(j, i)));
    ComplexMatrix v = ComplexMatrix::identity(n);

    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (std::sqrt(off) <= 1e-15 * scale * n) break;

        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                // Unitary 2x2 rotation annihilating a(p,q):
                // phase first, then a real Jacobi rotation.
                const cplx phase = apq / std::abs(apq);
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = 0.5 * std::atan2(2.0 * std::abs(apq), aqq - app);
                const double c = std::cos(theta);
                const cplx s = std::sin(theta) * phase;

                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - std::conj(s) * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = std::conj(s) * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - std::conj(s) * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
    }

    HermitianEigen out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = a(i, i).real();
    out.vectors = v;
    if (sort_ascending) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            return out.values[x] < out.values[y];
        });
        HermitianEigen sorted;
        sorted.values.resize(n);
        sorted.vectors = ComplexMatrix(n, n);
        for (std::size_t k = 0; k < n; ++k) {
            sorted.values[k] = out.values[order[k]];
            for (std::size_t i = 0; i < n; ++i) sorted.vectors(i, k) = out.vectors(i, order[k]);
        }
        return sorted;
    }
    return out;
}

inline double min_eigenvalue_hermitian(const ComplexMatrix& h, double tol = 1e-8) {
    const auto eig = eigen_hermitian(h, tol);
    return *std::min_element(eig.values.begin(), eig.values.end());
}

// ------------------------------ vectorization --------------------------------

// Row-major stacking: vec index a*d + b holds <a|rho|b>. All superoperator
// matrix elements in the repo follow this convention.
inline std::vector<cplx> vectorize(const ComplexMatrix& m) {
    if (!m.square()) throw dimension_error("vectorize: matrix not square");
    return m.data();
}

inline ComplexMatrix devectorize(const std::vector<cplx>& v) {
    const auto d = static_cast<std::size_t>(std::llround(std::sqrt(double(v.size()))));
    if (d * d != v.size()) throw dimension_error("devectorize: length not a perfect square");
    ComplexMatrix m(d, d);
    m.data() = v;
    return m;
}

// ------------------------------ partial trace --------------------------------

// Trace out the bath factor of a system (x) bath matrix:
// (rho_S)_{ab} = sum_k <a,k| rho |b,k>.
inline ComplexMatrix partial_trace_bath(const ComplexMatrix& full, std::size_t d_s,
                                        std::size_t d_b) {
    if (!full.square() || full.rows() != d_s * d_b)
        throw dimension_error("partial_trace_bath: dimension mismatch");
    ComplexMatrix out(d_s, d_s);
    for (std::size_t a = 0; a < d_s; ++a)
        for (std::size_t b = 0; b < d_s; ++b)
            for (std::size_t k = 0; k < d_b; ++k)
                out(a, b) += full(a * d_b + k, b * d_b + k);
    return out;
}

// ------------------------------ state types ----------------------------------

// d x d complex Hermitian positive unit-trace matrix.
class DensityMatrix {
  public:
    DensityMatrix() = default;
    DensityMatrix(ComplexMatrix m, const Tolerances& tol = {}) : matrix_(std::move(m)) {
        if (!matrix_.square()) throw dimension_error("DensityMatrix: matrix not square");
        if (matrix_.hermiticity_defect() > tol.hermiticity)
            throw domain_error("DensityMatrix: not Hermitian within tolerance");
        if (std::abs(matrix_.trace() - cplx{1.0, 0.0}) > tol.trace)
            throw domain_error("DensityMatrix: trace deviates from one");
    }

    std::size_t dim() const noexcept { return matrix_.rows(); }
    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    cplx operator()(std::size_t a, std::size_t b) const { return matrix_(a, b); }

    double min_eigenvalue() const { return min_eigenvalue_hermitian(matrix_, 1e-6); }

    static DensityMatrix pure(const std::vector<cplx>& amplitudes) {
        const std::size_t d = amplitudes.size();
        double n2 = 0.0;
        for (const auto& a : amplitudes) n2 += std::norm(a);
        ComplexMatrix m(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                m(i, j) = amplitudes[i] * std::conj(amplitudes[j]) / n2;
        return DensityMatrix(std::move(m));
    }

  private:
    ComplexMatrix matrix_;
};

// d^2 x d^2 matrix acting on column-vectorized density matrices.
struct Superoperator {
    std::size_t dim = 0;        // Hilbert-space dimension d
    ComplexMatrix matrix;       // d^2 x d^2

    Superoperator() = default;
    explicit Superoperator(std::size_t d) : dim(d), matrix(d * d, d * d) {}

    ComplexMatrix apply(const ComplexMatrix& rho) const {
        if (rho.rows() != dim || rho.cols() != dim)
            throw dimension_error("Superoperator::apply: dimension mismatch");
        const auto v = vectorize(rho);
        std::vector<cplx> w(v.size(), cplx{0.0, 0.0});
        for (std::size_t i = 0; i < v.size(); ++i)
            for (std::size_t j = 0; j < v.size(); ++j) w[i] += matrix(i, j) * v[j];
        return devectorize(w);
    }

    Superoperator& operator+=(const Superoperator& o) {
        matrix += o.matrix;
        return *this;
    }
    friend Superoperator operator*(const Superoperator& a, const Superoperator& b) {
        Superoperator c(a.dim);
        c.matrix = a.matrix * b.matrix;
        return c;
    }
};

// vec(A rho B) = kron(A, B^T) vec(rho): left/right multiplication superoperators.
inline ComplexMatrix sandwich_superop(const ComplexMatrix& left, const ComplexMatrix& right) {
    return kron(left, right.transpose());
}

} // namespace dcg
