#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "bvtn/errors.hpp"
#include "bvtn/matrix.hpp"
#include "bvtn/nodes.hpp"

namespace bvtn {

/// Packed bidiagonal decomposition of a Bernstein collocation matrix A
/// ((l+1) x (n+1), nodes strictly inside (0,1)).
///
/// Layout (0-based storage, 1-based in the formulas below):
///   entry(k,k)           = p_{k+1,k+1}   diagonal pivots, k = 0..n
///   entry(r,t), r > t    = m_{r+1,t+1}   multipliers of the elimination of A
///   entry(t,c), c > t    = mt_{c+1,t+1}  multipliers of the elimination of A^T
///
/// The same array represents the factorization of A and of A^{-1};
/// algebra.hpp knows how to apply either.
template <class T>
class BdMatrix {
public:
    BdMatrix(int rows, int cols) : m_(rows, cols) {
        if (cols > rows) throw DegreeExceedsRows("bd matrix must have rows >= cols");
    }
    explicit BdMatrix(Matrix<T> packed) : m_(std::move(packed)) {
        if (m_.cols() > m_.rows()) throw DegreeExceedsRows("bd matrix must have rows >= cols");
    }

    int rows() const { return m_.rows(); } // l+1
    int cols() const { return m_.cols(); } // n+1

    T& entry(int i, int j) { return m_(i, j); }
    const T& entry(int i, int j) const { return m_(i, j); }

    const T& pivot(int k) const { return m_(k, k); }
    /// m_{r+1,t+1}: multiplier eliminating row r against row r-1 in column t.
    const T& lower(int r, int t) const { return m_(r, t); }
    /// mt_{c+1,t+1}: transposed-elimination multiplier, stored above the diagonal.
    const T& upper(int t, int c) const { return m_(t, c); }

    const Matrix<T>& packed() const { return m_; }

    template <class U>
    BdMatrix<U> cast() const {
        Matrix<U> out(rows(), cols());
        for (int i = 0; i < rows(); ++i)
            for (int j = 0; j < cols(); ++j) out(i, j) = U(m_(i, j));
        return BdMatrix<U>(std::move(out));
    }

    bool operator==(const BdMatrix&) const = default;

private:
    Matrix<T> m_;
};

/// Bidiagonal decomposition straight from the nodes, never forming A.
/// All updates multiply or divide strictly positive quantities (ordered-node
/// differences and complements), so every entry is computed to high relative
/// accuracy.  Cost is O(l*n): the closed-form products are maintained as
/// running products along each row.
template <class T>
BdMatrix<T> compute_bd(const NodeSet<T>& nodes, int degree) {
    const int l = nodes.l();
    const int n = degree;
    if (n < 0 || n > l) throw DegreeExceedsRows("basis degree exceeds node count minus one");
    const int rows = l + 1, cols = n + 1;
    BdMatrix<T> bd(rows, cols);
    const auto& x = nodes.values();

    // diagonal pivots p_{i,i}, i = 1..n+1
    T binom(1);                 // C(n, i-1), updated incrementally
    T compl_prod(1);            // prod_{k=1}^{i-1} (1 - x_k)
    for (int i = 1; i <= cols; ++i) {
        if (i > 1) {
            binom = binom * T(n - i + 2) / T(i - 1);
            compl_prod *= T(1) - x[i - 2];
        }
        T node_prod(1); // prod_{k<i} (x_i - x_k)
        for (int k = 1; k < i; ++k) node_prod *= x[i - 1] - x[k - 1];
        T pw(1); // (1 - x_i)^{n-i+1}
        for (int e = 0; e < n - i + 1; ++e) pw *= T(1) - x[i - 1];
        T p = binom * pw * node_prod / compl_prod;
        if (p == T(0)) throw UnderflowDetected("diagonal pivot underflowed to zero");
        bd.entry(i - 1, i - 1) = p;
    }

    // lower multipliers m_{i,j}, row i = 2..l+1, j = 1..min(i-1, n+1)
    for (int i = 2; i <= rows; ++i) {
        const T xi = x[i - 1];
        const T xim1 = x[i - 2];
        const T ci = T(1) - xi;     // 1 - x_i
        const T cim1 = T(1) - xim1; // 1 - x_{i-1}
        T pow_i(1);                 // (1 - x_i)^{n-j+1}, starts at j=1
        for (int e = 0; e < n; ++e) pow_i *= ci;
        T pow_im1(1); // (1 - x_{i-1})^{n-j+2}
        for (int e = 0; e < n + 1; ++e) pow_im1 *= cim1;
        T num_prod(1); // prod_{k=1}^{j-1} (x_i - x_{i-k})
        T den_prod(1); // prod_{k=2}^{j} (x_{i-1} - x_{i-k})
        const int jmax = std::min(i - 1, cols);
        for (int j = 1; j <= jmax; ++j) {
            if (j > 1) {
                num_prod *= xi - x[i - j];       // gains (x_i - x_{i-j+1})
                den_prod *= xim1 - x[i - j - 1]; // gains (x_{i-1} - x_{i-j})
                pow_i /= ci;
                pow_im1 /= cim1;
            }
            bd.entry(i - 1, j - 1) =
                pow_i * (T(1) - x[i - j - 1]) * num_prod / (pow_im1 * den_prod);
        }
    }

    // transposed-elimination multipliers mt_{i,j} = (n-i+2) x_j / ((i-1)(1-x_j)),
    // j = 1..n, i = j+1..n+1; stored at (j-1, i-1)
    for (int j = 1; j <= n; ++j) {
        const T ratio = x[j - 1] / (T(1) - x[j - 1]);
        for (int i = j + 1; i <= n + 1; ++i)
            bd.entry(j - 1, i - 1) = T(n - i + 2) * ratio / T(i - 1);
    }

    return bd;
}

} // namespace bvtn
