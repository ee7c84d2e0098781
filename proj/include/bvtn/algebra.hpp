#pragma once

#include "bvtn/bidiagonal.hpp"
#include "bvtn/errors.hpp"
#include "bvtn/matrix.hpp"

namespace bvtn {

// The packed decomposition encodes A as a product of elimination-step
// factors.  With S_t the step-t elimination matrix of A (unit lower
// bidiagonal on rows t+1..l+1, entries -m_{i,t}) and St_t the analogue for
// A^T (entries -mt_{i,t}),
//
//   A     = S_1^{-1} ... S_{n+1}^{-1} . D . (St_n^T)^{-1} ... (St_1^T)^{-1}
//   A^{-1} = St_1^T ... St_n^T . D^{-1} . S_n ... S_1          (square case)
//
// Applying any single factor to a vector or matrix is one bidiagonal sweep,
// and for the expansion routines every sweep only adds and multiplies
// nonnegative values.

/// Dense (l+1) x (n+1) expansion of the factored matrix.
template <class T>
Matrix<T> expand(const BdMatrix<T>& bd) {
    const int rows = bd.rows(), cols = bd.cols();
    Matrix<T> a(rows, cols);
    for (int k = 0; k < cols; ++k) a(k, k) = bd.pivot(k);

    // post-multiply (St_t^T)^{-1} for t = n..1: column c picks up column c-1
    for (int t = cols - 2; t >= 0; --t)
        for (int c = t + 1; c < cols; ++c) {
            const T& w = bd.upper(t, c);
            for (int r = 0; r < rows; ++r) a(r, c) += w * a(r, c - 1);
        }

    // pre-multiply S_t^{-1} for t = n+1..1: row r picks up row r-1
    for (int t = cols - 1; t >= 0; --t)
        for (int r = t + 1; r < rows; ++r) {
            const T& w = bd.lower(r, t);
            for (int c = 0; c < cols; ++c) a(r, c) += w * a(r - 1, c);
        }

    return a;
}

/// A*v without forming A; factors of the expansion applied right to left.
template <class T>
Vector<T> matvec(const BdMatrix<T>& bd, const Vector<T>& v) {
    const int rows = bd.rows(), cols = bd.cols();
    if (static_cast<int>(v.size()) != cols) throw DimensionMismatch("matvec: vector length must equal cols");

    Vector<T> y = v;
    for (int t = 0; t <= cols - 2; ++t)
        for (int c = cols - 2; c >= t; --c) y[c] += bd.upper(t, c + 1) * y[c + 1];

    Vector<T> w(rows, T(0));
    for (int k = 0; k < cols; ++k) w[k] = bd.pivot(k) * y[k];

    for (int t = cols - 1; t >= 0; --t)
        for (int r = t + 1; r < rows; ++r) w[r] += bd.lower(r, t) * w[r - 1];
    return w;
}

/// Product of the diagonal pivots; the unit-triangular factors contribute 1.
template <class T>
T determinant(const BdMatrix<T>& bd) {
    if (bd.rows() != bd.cols()) throw NotSquare("determinant requires a square matrix");
    T det(1);
    for (int k = 0; k < bd.cols(); ++k) det *= bd.pivot(k);
    return det;
}

/// Solve A x = b through the factorization of A^{-1} (square case only):
/// apply S_1..S_n, divide by the pivots, then apply St_n^T..St_1^T.
template <class T>
Vector<T> solve_system(const BdMatrix<T>& bd, const Vector<T>& b) {
    const int n1 = bd.cols();
    if (bd.rows() != n1) throw NotSquare("solve_system requires a square matrix");
    if (static_cast<int>(b.size()) != n1) throw DimensionMismatch("solve_system: rhs length must equal order");

    Vector<T> y = b;
    for (int t = 0; t <= n1 - 2; ++t)
        for (int r = n1 - 1; r > t; --r) y[r] -= bd.lower(r, t) * y[r - 1];

    for (int k = 0; k < n1; ++k) y[k] /= bd.pivot(k);

    for (int t = n1 - 2; t >= 0; --t)
        for (int c = t; c <= n1 - 2; ++c) y[c] -= bd.upper(t, c + 1) * y[c + 1];
    return y;
}

} // namespace bvtn
