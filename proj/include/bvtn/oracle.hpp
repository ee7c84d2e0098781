#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bvtn/errors.hpp"
#include "bvtn/matrix.hpp"
#include "bvtn/nodes.hpp"
#include "bvtn/bidiagonal.hpp"
#include "bvtn/kernels.hpp"
#include "bvtn/precision.hpp"
#include "bvtn/spectral.hpp"

// Ground-truth engines: exact rational Neville elimination against which the
// closed-form decomposition is verified, and high-precision spectra used as
// the reference column of the error reports.

namespace bvtn::oracle {

using RationalNodeSet = NodeSet<Rational>;

/// Collocation matrix of the Bernstein basis at the given nodes, evaluated
/// entry by entry: a(i,j) = C(n,j) x_i^j (1-x_i)^{n-j}.
template <class T>
Matrix<T> bernstein_matrix(const NodeSet<T>& nodes, int degree) {
    const int rows = nodes.count(), cols = degree + 1;
    if (cols > rows) throw DegreeExceedsRows("basis degree exceeds node count minus one");
    Matrix<T> a(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const T& x = nodes[i];
        T binom(1);
        for (int j = 0; j < cols; ++j) {
            if (j > 0) binom = binom * T(degree - j + 1) / T(j);
            T v = binom;
            for (int e = 0; e < j; ++e) v *= x;
            for (int e = 0; e < degree - j; ++e) v *= T(1) - x;
            a(i, j) = v;
        }
    }
    return a;
}

/// Pivots p(i,j) and multipliers m(i,j) = p(i,j)/p(i-1,j) of the Neville
/// elimination of A, as exact rationals (lower trapezoid of each matrix).
struct PivotTable {
    Matrix<Rational> pivots;      // p(i,j) at (i-1, j-1), j <= i
    Matrix<Rational> multipliers; // m(i,j) at (i-1, j-1), j <  i
};

namespace detail {

/// One full Neville elimination (adjacent-row recurrence) over `steps` columns.
/// Records pivots/multipliers into the caller's tables via `record`.
template <class Record>
void neville_eliminate(Matrix<Rational>& a, int steps, Record&& record) {
    const int rows = a.rows(), cols = a.cols();
    for (int t = 0; t < steps; ++t) {
        for (int i = t; i < rows; ++i) {
            if (a(i, t) == 0) {
                std::ostringstream os;
                os << "zero pivot at (" << i + 1 << "," << t + 1 << "); input is not strictly "
                   << "totally positive";
                throw ZeroPivot(os.str());
            }
            record(i, t, a(i, t), /*is_pivot=*/true);
        }
        for (int i = rows - 1; i > t; --i) {
            Rational mult = a(i, t) / a(i - 1, t);
            record(i, t, mult, /*is_pivot=*/false);
            for (int j = t; j < cols; ++j) a(i, j) -= mult * a(i - 1, j);
        }
    }
}

} // namespace detail

/// Complete Neville elimination of the exact rational collocation matrix:
/// eliminate A to U, then eliminate U^T, and pack the results the same way
/// compute_bd does.  No row exchanges ever happen; a zero pivot is reported
/// as a bug in the input, never recovered from.
inline std::pair<BdMatrix<Rational>, PivotTable> neville_exact(const RationalNodeSet& nodes,
                                                               int degree) {
    const int rows = nodes.count(), cols = degree + 1;
    Matrix<Rational> a = bernstein_matrix(nodes, degree);

    BdMatrix<Rational> bd(rows, cols);
    PivotTable table{Matrix<Rational>(rows, cols), Matrix<Rational>(rows, cols)};

    detail::neville_eliminate(a, cols, [&](int i, int t, const Rational& v, bool is_pivot) {
        if (is_pivot) {
            if (t < cols) table.pivots(i, t) = v;
            if (i == t) bd.entry(t, t) = v;
        } else {
            table.multipliers(i, t) = v;
            bd.entry(i, t) = v;
        }
    });

    // a is now U; eliminate U^T to pick up the transposed multipliers
    Matrix<Rational> ut = a.transposed();
    detail::neville_eliminate(ut, cols - 1, [&](int i, int t, const Rational& v, bool is_pivot) {
        if (!is_pivot && i < cols) bd.entry(t, i) = v;
    });

    return {std::move(bd), std::move(table)};
}

/// Exact rational determinant by Gaussian elimination with row pivoting.
inline Rational rational_determinant(Matrix<Rational> a) {
    const int n = a.rows();
    if (a.cols() != n) throw NotSquare("determinant of a non-square block");
    Rational det(1);
    for (int k = 0; k < n; ++k) {
        int piv = k;
        while (piv < n && a(piv, k) == 0) ++piv;
        if (piv == n) return Rational(0);
        if (piv != k) {
            for (int j = k; j < n; ++j) std::swap(a(piv, j), a(k, j));
            det = -det;
        }
        det *= a(k, k);
        for (int i = k + 1; i < n; ++i) {
            Rational f = a(i, k) / a(k, k);
            for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return det;
}

/// Verify the minor-quotient identity
///   p(i,j) = det A[i-j+1..i | 1..j] / det A[i-j+1..i-1 | 1..j-1]
/// for every pivot of the elimination.  Exact minors cost factorial time;
/// intended for small sizes (l <= 8).
inline bool check_pivot_minors(const RationalNodeSet& nodes, int degree,
                               std::string* counterexample = nullptr) {
    const int rows = nodes.count(), cols = degree + 1;
    Matrix<Rational> a = bernstein_matrix(nodes, degree);
    auto [bd, table] = neville_exact(nodes, degree);

    auto minor = [&](int row0, int nrows, int ncols) {
        Matrix<Rational> sub(nrows, ncols);
        for (int i = 0; i < nrows; ++i)
            for (int j = 0; j < ncols; ++j) sub(i, j) = a(row0 + i, j);
        return rational_determinant(std::move(sub));
    };

    for (int j = 1; j <= cols; ++j) {
        for (int i = j; i <= rows; ++i) {
            Rational expected;
            if (j == 1) {
                expected = a(i - 1, 0);
            } else {
                Rational num = minor(i - j, j, j);
                Rational den = minor(i - j, j - 1, j - 1);
                expected = num / den;
            }
            if (table.pivots(i - 1, j - 1) != expected) {
                if (counterexample) {
                    std::ostringstream os;
                    os << "pivot (" << i << "," << j << ") = " << table.pivots(i - 1, j - 1)
                       << " but the minor quotient gives " << expected;
                    *counterexample = os.str();
                }
                return false;
            }
        }
    }
    return true;
}

enum class SpectrumKind { eigen, singular };

/// Reference spectrum carrying full working precision.
struct HighPrecSpectrum {
    std::vector<BigFloat> values; // sorted descending
    int bits = 0;
    int digits = 0;
};

/// High-precision reference: expand the exact rational matrix, convert to
/// floats carrying >= `digits` decimal digits, and iterate with a deflation
/// threshold of 10^(1-digits).
inline HighPrecSpectrum reference_spectrum(const RationalNodeSet& nodes, int degree,
                                           SpectrumKind kind, int digits = 50) {
    const int bits = bits_for_digits(digits);
    PrecisionScope scope(bits);

    Matrix<Rational> exact = bernstein_matrix(nodes, degree);
    Matrix<BigFloat> a(exact.rows(), exact.cols());
    for (int i = 0; i < exact.rows(); ++i)
        for (int j = 0; j < exact.cols(); ++j) a(i, j) = BigFloat(exact(i, j));

    BigFloat tol = boost::multiprecision::pow(BigFloat(10), 1 - digits);
    const int cap = 500 * std::max(a.rows(), a.cols());
    std::optional<std::vector<BigFloat>> vals;
    if (kind == SpectrumKind::eigen) {
        if (a.rows() != a.cols()) throw NotSquare("eigenvalue reference requires a square matrix");
        vals = kernels::eigenvalues_qr(std::move(a), tol, cap);
    } else {
        vals = kernels::singular_values_qr(std::move(a), tol, cap);
    }
    if (!vals) throw NoConvergence("high-precision reference iteration did not converge");
    return HighPrecSpectrum{std::move(*vals), bits, digits};
}

/// Per-value (reference, computed, relative error) rows.
struct ErrorRow {
    double reference;
    double computed;
    double rel_error;
};

struct ErrorReport {
    std::vector<ErrorRow> rows;

    double max_rel_error() const {
        double m = 0;
        for (const auto& r : rows) m = std::max(m, r.rel_error);
        return m;
    }
};

inline ErrorReport relative_errors(const HighPrecSpectrum& reference,
                                   const std::vector<double>& computed) {
    if (reference.values.size() != computed.size())
        throw LengthMismatch("reference and computed spectra differ in length");
    PrecisionScope scope(reference.bits);
    ErrorReport report;
    report.rows.reserve(computed.size());
    for (std::size_t i = 0; i < computed.size(); ++i) {
        const BigFloat& ref = reference.values[i];
        BigFloat err = abs(BigFloat(computed[i]) - ref) / abs(ref);
        report.rows.push_back(
            {ref.convert_to<double>(), computed[i], err.convert_to<double>()});
    }
    return report;
}

inline ErrorReport relative_errors(const HighPrecSpectrum& reference, const Spectrum& computed) {
    return relative_errors(reference, computed.values);
}

} // namespace bvtn::oracle
