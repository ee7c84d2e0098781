#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "bvtn/errors.hpp"
#include "bvtn/matrix.hpp"

// Dense iteration kernels, templated on the scalar so the same code runs in
// plain doubles (the baselines) and in mpfr floats (the adaptive engine and
// the high-precision references).  Convergence thresholds are passed in
// explicitly rather than read from numeric_limits.

namespace bvtn::kernels {

using std::abs;
using std::sqrt;

/// hypot without overflow, works for any scalar with abs/sqrt.
template <class T>
T pythag(const T& a, const T& b) {
    T aa = abs(a), ab = abs(b);
    if (aa < ab) std::swap(aa, ab);
    if (aa == T(0)) return T(0);
    T r = ab / aa;
    return aa * sqrt(T(1) + r * r);
}

template <class T>
struct GivensRotation {
    T c, s; // [c s; -s c] applied from the left zeroes the second entry
};

template <class T>
GivensRotation<T> make_givens(const T& a, const T& b) {
    if (b == T(0)) return {T(1), T(0)};
    T r = pythag(a, b);
    return {a / r, b / r};
}

// ---------------------------------------------------------------------------
// Householder QR with full Q (rows x rows), R with nonnegative diagonal.
// ---------------------------------------------------------------------------
template <class T>
struct QrFactors {
    Matrix<T> q; // (rows x rows), orthogonal
    Matrix<T> r; // (cols x cols), upper triangular, positive diagonal
};

template <class T>
QrFactors<T> householder_qr(Matrix<T> a) {
    const int rows = a.rows(), cols = a.cols();
    if (rows < cols) throw DimensionMismatch("householder_qr expects rows >= cols");
    Matrix<T> q = Matrix<T>::identity(rows);

    std::vector<T> v(rows);
    for (int k = 0; k < cols; ++k) {
        T norm(0);
        for (int i = k; i < rows; ++i) norm = pythag(norm, a(i, k));
        if (norm == T(0)) continue;
        T alpha = a(k, k) >= T(0) ? -norm : norm;
        T vnorm2(0);
        for (int i = k; i < rows; ++i) {
            v[i] = a(i, k);
            if (i == k) v[i] -= alpha;
            vnorm2 += v[i] * v[i];
        }
        if (vnorm2 == T(0)) continue;
        // a <- (I - 2 v v^T / v^T v) a ; accumulate the same product into q
        for (int j = k; j < cols; ++j) {
            T dot(0);
            for (int i = k; i < rows; ++i) dot += v[i] * a(i, j);
            T f = T(2) * dot / vnorm2;
            for (int i = k; i < rows; ++i) a(i, j) -= f * v[i];
        }
        for (int j = 0; j < rows; ++j) {
            T dot(0);
            for (int i = k; i < rows; ++i) dot += v[i] * q(i, j);
            T f = T(2) * dot / vnorm2;
            for (int i = k; i < rows; ++i) q(i, j) -= f * v[i];
        }
    }

    // q currently holds Q^T; flip reflector signs so diag(R) > 0
    for (int k = 0; k < cols; ++k) {
        if (a(k, k) < T(0)) {
            for (int j = 0; j < cols; ++j) a(k, j) = -a(k, j);
            for (int j = 0; j < rows; ++j) q(k, j) = -q(k, j);
        }
    }

    QrFactors<T> out{q.transposed(), Matrix<T>(cols, cols)};
    for (int i = 0; i < cols; ++i)
        for (int j = i; j < cols; ++j) out.r(i, j) = a(i, j);
    return out;
}

// ---------------------------------------------------------------------------
// Eigenvalues: Householder Hessenberg reduction + explicitly shifted QR with
// Wilkinson shifts.  Returns nullopt when a terminal 2x2 block has complex
// eigenvalues or the sweep cap is hit; callers decide whether that means a
// precision retry or NoConvergence.
// ---------------------------------------------------------------------------
template <class T>
Matrix<T> hessenberg_reduce(Matrix<T> a) {
    const int n = a.rows();
    std::vector<T> v(n);
    for (int k = 0; k < n - 2; ++k) {
        T norm(0);
        for (int i = k + 1; i < n; ++i) norm = pythag(norm, a(i, k));
        if (norm == T(0)) continue;
        T alpha = a(k + 1, k) >= T(0) ? -norm : norm;
        T vnorm2(0);
        for (int i = k + 1; i < n; ++i) {
            v[i] = a(i, k);
            if (i == k + 1) v[i] -= alpha;
            vnorm2 += v[i] * v[i];
        }
        if (vnorm2 == T(0)) continue;
        for (int j = k; j < n; ++j) {
            T dot(0);
            for (int i = k + 1; i < n; ++i) dot += v[i] * a(i, j);
            T f = T(2) * dot / vnorm2;
            for (int i = k + 1; i < n; ++i) a(i, j) -= f * v[i];
        }
        for (int i = 0; i < n; ++i) {
            T dot(0);
            for (int j = k + 1; j < n; ++j) dot += a(i, j) * v[j];
            T f = T(2) * dot / vnorm2;
            for (int j = k + 1; j < n; ++j) a(i, j) -= f * v[j];
        }
        for (int i = k + 2; i < n; ++i) a(i, k) = T(0);
        a(k + 1, k) = alpha;
    }
    return a;
}

/// Real eigenvalues of the trailing 2x2 block, if they exist.
template <class T>
std::optional<std::pair<T, T>> real_eig_2x2(const T& a, const T& b, const T& c, const T& d) {
    T half_tr = (a + d) / T(2);
    T det = a * d - b * c;
    T disc = half_tr * half_tr - det;
    if (disc < T(0)) return std::nullopt;
    T root = sqrt(disc);
    T e1 = half_tr >= T(0) ? half_tr + root : half_tr - root;
    T e2 = (e1 == T(0)) ? T(0) : det / e1; // small root via the product, no cancellation
    return std::make_pair(e1, e2);
}

template <class T>
std::optional<std::vector<T>> eigenvalues_qr(Matrix<T> a, const T& tol, int max_sweeps) {
    const int n = a.rows();
    if (a.cols() != n) throw NotSquare("eigenvalues_qr requires a square matrix");
    if (n == 0) return std::vector<T>{};
    Matrix<T> h = hessenberg_reduce(std::move(a));
    std::vector<T> eig;
    eig.reserve(n);

    int hi = n - 1;
    int iter = 0;
    while (hi >= 0) {
        // deflation scan for the active block [lo..hi]
        int lo = hi;
        while (lo > 0 && abs(h(lo, lo - 1)) > tol * (abs(h(lo - 1, lo - 1)) + abs(h(lo, lo)))) --lo;
        if (lo > 0) h(lo, lo - 1) = T(0);

        if (lo == hi) {
            eig.push_back(h(hi, hi));
            --hi;
            iter = 0;
            continue;
        }
        if (lo == hi - 1) {
            auto pair = real_eig_2x2(h(lo, lo), h(lo, hi), h(hi, lo), h(hi, hi));
            if (!pair) return std::nullopt; // complex pair: impossible for exact TP input
            eig.push_back(pair->first);
            eig.push_back(pair->second);
            hi -= 2;
            iter = 0;
            continue;
        }

        if (++iter > max_sweeps) return std::nullopt;

        // Wilkinson shift from the trailing 2x2; Rayleigh fallback, and an
        // exceptional shift every 16 stalled sweeps
        T shift = h(hi, hi);
        if (auto pair = real_eig_2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi))) {
            shift = abs(pair->first - h(hi, hi)) < abs(pair->second - h(hi, hi)) ? pair->first
                                                                                 : pair->second;
        }
        if (iter % 16 == 0) shift += abs(h(hi, hi - 1));

        // explicit shifted QR step on the block: H <- RQ + shift*I
        for (int i = lo; i <= hi; ++i) h(i, i) -= shift;
        std::vector<GivensRotation<T>> rot(hi - lo);
        for (int k = lo; k < hi; ++k) {
            auto g = make_givens(h(k, k), h(k + 1, k));
            rot[k - lo] = g;
            for (int j = k; j <= hi; ++j) {
                T t1 = h(k, j), t2 = h(k + 1, j);
                h(k, j) = g.c * t1 + g.s * t2;
                h(k + 1, j) = -g.s * t1 + g.c * t2;
            }
        }
        for (int k = lo; k < hi; ++k) {
            const auto& g = rot[k - lo];
            for (int i = lo; i <= std::min(k + 1, hi); ++i) {
                T t1 = h(i, k), t2 = h(i, k + 1);
                h(i, k) = g.c * t1 + g.s * t2;
                h(i, k + 1) = -g.s * t1 + g.c * t2;
            }
        }
        for (int i = lo; i <= hi; ++i) h(i, i) += shift;
    }

    std::sort(eig.begin(), eig.end(), std::greater<T>());
    return eig;
}

// ---------------------------------------------------------------------------
// Singular values: Householder bidiagonalization (Golub-Kahan) followed by
// implicit-shift QR on the bidiagonal (Golub-Reinsch, values only).
// ---------------------------------------------------------------------------
template <class T>
void bidiagonalize(Matrix<T>& a, std::vector<T>& d, std::vector<T>& e) {
    const int rows = a.rows(), cols = a.cols();
    d.assign(cols, T(0));
    e.assign(cols, T(0)); // e[j] couples columns j-1 and j
    std::vector<T> v(std::max(rows, cols));

    for (int k = 0; k < cols; ++k) {
        // left reflector on column k
        T norm(0);
        for (int i = k; i < rows; ++i) norm = pythag(norm, a(i, k));
        if (norm != T(0)) {
            T alpha = a(k, k) >= T(0) ? -norm : norm;
            T vnorm2(0);
            for (int i = k; i < rows; ++i) {
                v[i] = a(i, k);
                if (i == k) v[i] -= alpha;
                vnorm2 += v[i] * v[i];
            }
            if (vnorm2 != T(0)) {
                for (int j = k; j < cols; ++j) {
                    T dot(0);
                    for (int i = k; i < rows; ++i) dot += v[i] * a(i, j);
                    T f = T(2) * dot / vnorm2;
                    for (int i = k; i < rows; ++i) a(i, j) -= f * v[i];
                }
            }
            a(k, k) = alpha;
        }
        d[k] = a(k, k);

        // right reflector on row k (columns k+1..)
        if (k < cols - 2) {
            T rnorm(0);
            for (int j = k + 1; j < cols; ++j) rnorm = pythag(rnorm, a(k, j));
            if (rnorm != T(0)) {
                T alpha = a(k, k + 1) >= T(0) ? -rnorm : rnorm;
                T vnorm2(0);
                for (int j = k + 1; j < cols; ++j) {
                    v[j] = a(k, j);
                    if (j == k + 1) v[j] -= alpha;
                    vnorm2 += v[j] * v[j];
                }
                if (vnorm2 != T(0)) {
                    for (int i = k + 1; i < rows; ++i) {
                        T dot(0);
                        for (int j = k + 1; j < cols; ++j) dot += a(i, j) * v[j];
                        T f = T(2) * dot / vnorm2;
                        for (int j = k + 1; j < cols; ++j) a(i, j) -= f * v[j];
                    }
                }
                a(k, k + 1) = alpha;
            }
        }
        if (k < cols - 1) e[k + 1] = a(k, k + 1);
    }
}

/// Values-only Golub-Reinsch iteration on the bidiagonal (d, e) where e[i]
/// couples d[i-1] and d[i].  max_sweeps caps the QR steps spent per
/// singular value.
template <class T>
std::optional<std::vector<T>> singular_values_qr(Matrix<T> a, const T& tol, int max_sweeps) {
    if (a.rows() < a.cols()) a = a.transposed();
    const int n = a.cols();
    if (n == 0) return std::vector<T>{};
    std::vector<T> w, e;
    bidiagonalize(a, w, e);

    T anorm(0);
    for (int i = 0; i < n; ++i) {
        T t = abs(w[i]) + abs(e[i]);
        if (t > anorm) anorm = t;
    }

    for (int k = n - 1; k >= 0; --k) {
        for (int its = 1;; ++its) {
            // split test: find the start l of the active block ending at k
            bool cancel = false;
            int l;
            for (l = k; l > 0; --l) {
                if (abs(e[l]) <= tol * (abs(w[l - 1]) + abs(w[l]))) break;
                if (abs(w[l - 1]) <= tol * anorm) {
                    cancel = true;
                    break;
                }
            }
            if (cancel) {
                // w[l-1] is negligible: rotate e[l] down the block and away
                T c(0), s(1);
                for (int i = l; i <= k; ++i) {
                    T f = s * e[i];
                    e[i] = c * e[i];
                    if (abs(f) <= tol * anorm) break;
                    T g = w[i];
                    T h = pythag(f, g);
                    w[i] = h;
                    h = T(1) / h;
                    c = g * h;
                    s = -f * h;
                }
            }
            T z = w[k];
            if (l == k) { // converged
                if (z < T(0)) w[k] = -z;
                break;
            }
            if (its > max_sweeps) return std::nullopt;

            // implicit-shift QR step on [l..k]
            T x = w[l], y = w[k - 1], g = e[k - 1], h = e[k];
            T f = ((y - z) * (y + z) + (g - h) * (g + h)) / (T(2) * h * y);
            g = pythag(f, T(1));
            T gs = f >= T(0) ? g : -g;
            f = ((x - z) * (x + z) + h * ((y / (f + gs)) - h)) / x;
            T c(1), s(1);
            for (int j = l; j <= k - 1; ++j) {
                int i = j + 1;
                g = e[i];
                y = w[i];
                h = s * g;
                g = c * g;
                z = pythag(f, h);
                e[j] = z;
                c = f / z;
                s = h / z;
                f = x * c + g * s;
                g = g * c - x * s;
                h = y * s;
                y *= c;
                z = pythag(f, h);
                w[j] = z;
                if (z != T(0)) {
                    z = T(1) / z;
                    c = f * z;
                    s = h * z;
                }
                f = c * g + s * y;
                x = c * y - s * g;
            }
            e[l] = T(0);
            e[k] = f;
            w[k] = x;
        }
    }

    for (T& s : w) s = abs(s);
    std::sort(w.begin(), w.end(), std::greater<T>());
    return w;
}

} // namespace bvtn::kernels
