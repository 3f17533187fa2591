// linalg.hpp
// Dense complex linear algebra at desk scale: vectors, square matrices,
// Hermitian eigendecomposition (cyclic Jacobi) and Gram-Schmidt
// orthonormalization. Everything is value-semantic std::vector storage;
// dimensions here stay small (product spaces up to 2^14, matrices up to
// a few dozen rows).

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "ontic/common.hpp"

namespace ontic {

using cx = std::complex<double>;
using CVec = std::vector<cx>;

inline cx inner(const CVec& a, const CVec& b) {
    if (a.size() != b.size())
        throw dimension_mismatch("inner product of vectors with different dimensions");
    cx s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

inline double norm2(const CVec& a) {
    double s = 0.0;
    for (const auto& z : a) s += std::norm(z);
    return s;
}

inline void scale(CVec& a, cx f) {
    for (auto& z : a) z *= f;
}

inline void axpy(CVec& y, cx f, const CVec& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += f * x[i];
}

// Row-major square complex matrix.
struct CMat {
    std::size_t n = 0;
    std::vector<cx> a;

    CMat() = default;
    explicit CMat(std::size_t n_) : n(n_), a(n_ * n_, cx{0.0, 0.0}) {}

    cx& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    const cx& at(std::size_t i, std::size_t j) const { return a[i * n + j]; }

    static CMat identity(std::size_t n) {
        CMat m(n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = cx{1.0, 0.0};
        return m;
    }

    static CMat outer(const CVec& v) {
        CMat m(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            for (std::size_t j = 0; j < v.size(); ++j)
                m.at(i, j) = v[i] * std::conj(v[j]);
        return m;
    }

    CMat& operator+=(const CMat& o) {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
        return *this;
    }

    // y = A x
    CVec apply(const CVec& x) const {
        if (x.size() != n) throw dimension_mismatch("matrix-vector dimension mismatch");
        CVec y(n, cx{0.0, 0.0});
        for (std::size_t i = 0; i < n; ++i) {
            cx s{0.0, 0.0};
            for (std::size_t j = 0; j < n; ++j) s += at(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }

    // <x|A|x>, real part (A assumed Hermitian in all call sites).
    double quad_form(const CVec& x) const {
        cx s{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            cx row{0.0, 0.0};
            for (std::size_t j = 0; j < n; ++j) row += at(i, j) * x[j];
            s += std::conj(x[i]) * row;
        }
        return s.real();
    }

    double max_abs_diff(const CMat& o) const {
        double m = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            m = std::max(m, std::abs(a[i] - o.a[i]));
        return m;
    }
};

struct HermitianEigen {
    std::vector<double> values;   // ascending
    std::vector<CVec> vectors;    // vectors[i] pairs with values[i]
};

// Cyclic Jacobi for complex Hermitian matrices. Quadratically convergent;
// plenty for the d <= 64 matrices this project sees.
inline HermitianEigen hermitian_eigen(CMat A, int max_sweeps = 64,
                                      double tol = 1e-14) {
    const std::size_t n = A.n;
    CMat V = CMat::identity(n);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(A.at(p, q));
        if (off <= tol * tol) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cx apq = A.at(p, q);
                const double mag = std::abs(apq);
                if (mag <= tol) continue;
                const double app = A.at(p, p).real();
                const double aqq = A.at(q, q).real();
                // R = [[c, -s*phase], [s*conj(phase), c]] on the (p,q) block
                // zeroes the pivot for t solving t^2*mag - t*(aqq-app) - mag = 0.
                const cx phase = apq / mag;
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? -1.0 : 1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cx rqp = s * std::conj(phase);   // R(q,p)
                const cx rpq = -s * phase;             // R(p,q)
                // Columns: A <- A R.
                for (std::size_t i = 0; i < n; ++i) {
                    const cx aip = A.at(i, p), aiq = A.at(i, q);
                    A.at(i, p) = c * aip + rqp * aiq;
                    A.at(i, q) = rpq * aip + c * aiq;
                }
                // Rows: A <- R^dagger A.
                for (std::size_t j = 0; j < n; ++j) {
                    const cx apj = A.at(p, j), aqj = A.at(q, j);
                    A.at(p, j) = c * apj + std::conj(rqp) * aqj;
                    A.at(q, j) = std::conj(rpq) * apj + c * aqj;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const cx vip = V.at(i, p), viq = V.at(i, q);
                    V.at(i, p) = c * vip + rqp * viq;
                    V.at(i, q) = rpq * vip + c * viq;
                }
            }
        }
    }
    HermitianEigen out;
    out.values.resize(n);
    out.vectors.assign(n, CVec(n));
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (A.at(order[j], order[j]).real() < A.at(order[i], order[i]).real())
                std::swap(order[i], order[j]);
    for (std::size_t i = 0; i < n; ++i) {
        out.values[i] = A.at(order[i], order[i]).real();
        for (std::size_t r = 0; r < n; ++r) out.vectors[i][r] = V.at(r, order[i]);
    }
    return out;
}

// Modified Gram-Schmidt, run twice for stability. Vectors must be linearly
// independent; throws if a vector collapses below tolerance.
inline void orthonormalize(std::vector<CVec>& basis, double tol = 1e-10) {
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i < basis.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                const cx proj = inner(basis[j], basis[i]);
                axpy(basis[i], -proj, basis[j]);
            }
            const double nn = std::sqrt(norm2(basis[i]));
            if (nn < tol)
                throw validation_error("orthonormalization_failed",
                                       "basis vectors are not linearly independent");
            scale(basis[i], cx{1.0 / nn, 0.0});
        }
    }
}

// Kronecker product of column vectors, left factor most significant.
inline CVec kron(const CVec& a, const CVec& b) {
    CVec out(a.size() * b.size());
    std::size_t idx = 0;
    for (const auto& x : a)
        for (const auto& y : b) out[idx++] = x * y;
    return out;
}

} // namespace ontic
