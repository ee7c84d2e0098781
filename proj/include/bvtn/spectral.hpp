#pragma once

#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "bvtn/algebra.hpp"
#include "bvtn/bidiagonal.hpp"
#include "bvtn/errors.hpp"
#include "bvtn/kernels.hpp"
#include "bvtn/matrix.hpp"
#include "bvtn/precision.hpp"

namespace bvtn {

/// Precision-doubling schedule for the spectral engine.  Each problem is
/// solved at start_bits, then at doubled precision, until two successive
/// precisions agree componentwise to stabilization_rtol (or max_bits is hit).
struct PrecisionPolicy {
    int start_bits = 106;
    int max_bits = 1024;
    double stabilization_rtol = 1e-15;

    void check() const {
        if (start_bits < 53 || start_bits > max_bits)
            throw Error("precision policy requires 53 <= start_bits <= max_bits");
        if (!(stabilization_rtol > 0.0 && stabilization_rtol < 1.0))
            throw Error("stabilization_rtol must lie in (0,1)");
    }
};

struct Spectrum {
    std::vector<double> values; // sorted descending, strictly positive
    int achieved_bits = 0;
    bool stabilized = false;
};

struct QrResult {
    Matrix<double> q;
    Matrix<double> r;
    int achieved_bits = 0;
};

struct LsqSolution {
    Vector<double> coefficients; // length n+1
    Vector<double> residual;     // length l+1
    double residual_norm = 0.0;
    int achieved_bits = 0;
};

namespace detail {

inline bool values_agree(const std::vector<double>& a, const std::vector<double>& b, double rtol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double small = std::min(std::abs(a[i]), std::abs(b[i]));
        double diff = std::abs(a[i] - b[i]);
        if (small < 1e-300) {
            if (diff > rtol) return false; // absolute compare near the underflow floor
        } else if (diff > rtol * small) {
            return false;
        }
    }
    return true;
}

inline BigFloat working_tolerance(int bits) {
    return boost::multiprecision::ldexp(BigFloat(1), -(bits - 2));
}

/// Run `solve(bits)` under the doubling schedule until two successive
/// results agree.  `solve` may return nullopt (kernel failure at that
/// precision); failures trigger a retry at higher precision.
template <class Result>
std::pair<Result, int> stabilize(const PrecisionPolicy& policy,
                                 const std::function<std::optional<Result>(int)>& solve,
                                 const std::function<std::vector<double>(const Result&)>& probe,
                                 bool& stabilized) {
    policy.check();
    std::optional<Result> prev;
    std::optional<Result> best;
    int best_bits = 0;
    int bits = policy.start_bits;
    for (;;) {
        std::optional<Result> cur = solve(bits);
        if (cur) {
            if (prev && values_agree(probe(*prev), probe(*cur), policy.stabilization_rtol)) {
                stabilized = true;
                return {std::move(*cur), bits};
            }
            best = cur;
            best_bits = bits;
            prev = std::move(cur);
        } else {
            prev.reset();
        }
        if (bits >= policy.max_bits) break;
        bits = std::min(2 * bits, policy.max_bits);
    }
    if (!best) throw PrecisionExhausted("no usable result up to max_bits");
    stabilized = false;
    return {std::move(*best), best_bits};
}

inline std::vector<double> to_doubles(const std::vector<BigFloat>& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const BigFloat& x : v) out.push_back(x.convert_to<double>());
    return out;
}

inline Matrix<double> to_doubles(const Matrix<BigFloat>& m) {
    Matrix<double> out(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).convert_to<double>();
    return out;
}

inline constexpr int kSweepFactor = 500;

} // namespace detail

/// Eigenvalues of the square matrix represented by `bd`.  The dense matrix
/// is re-expanded from the decomposition at every trial precision; the
/// expansion is accurate to the working precision regardless of the
/// condition number, so doubling the precision genuinely refines the result.
inline Spectrum eigenvalues(const BdMatrix<double>& bd, const PrecisionPolicy& policy = {}) {
    if (bd.rows() != bd.cols()) throw NotSquare("eigenvalues requires a square decomposition");
    const int dim = bd.rows();
    auto solve = [&](int bits) -> std::optional<std::vector<double>> {
        PrecisionScope scope(bits);
        auto a = expand(bd.cast<BigFloat>());
        auto vals = kernels::eigenvalues_qr(std::move(a), detail::working_tolerance(bits),
                                            detail::kSweepFactor * dim);
        if (!vals) return std::nullopt;
        return detail::to_doubles(*vals);
    };
    auto probe = [](const std::vector<double>& v) { return v; };
    Spectrum s;
    auto [values, bits] = detail::stabilize<std::vector<double>>(policy, solve, probe, s.stabilized);
    s.values = std::move(values);
    s.achieved_bits = bits;
    return s;
}

/// Singular values of the (possibly rectangular) matrix represented by `bd`.
inline Spectrum singular_values(const BdMatrix<double>& bd, const PrecisionPolicy& policy = {}) {
    const int dim = std::max(bd.rows(), bd.cols());
    auto solve = [&](int bits) -> std::optional<std::vector<double>> {
        PrecisionScope scope(bits);
        auto a = expand(bd.cast<BigFloat>());
        auto vals = kernels::singular_values_qr(std::move(a), detail::working_tolerance(bits),
                                                detail::kSweepFactor * dim);
        if (!vals) return std::nullopt;
        return detail::to_doubles(*vals);
    };
    auto probe = [](const std::vector<double>& v) { return v; };
    Spectrum s;
    auto [values, bits] = detail::stabilize<std::vector<double>>(policy, solve, probe, s.stabilized);
    s.values = std::move(values);
    s.achieved_bits = bits;
    return s;
}

/// QR factorization A = Q [R; 0] with full Q and positive diag(R), computed
/// in adaptive precision and rounded to doubles.
inline QrResult qr(const BdMatrix<double>& bd, const PrecisionPolicy& policy = {}) {
    using Factors = std::pair<Matrix<double>, Matrix<double>>;
    auto solve = [&](int bits) -> std::optional<Factors> {
        PrecisionScope scope(bits);
        auto a = expand(bd.cast<BigFloat>());
        auto f = kernels::householder_qr(std::move(a));
        return Factors{detail::to_doubles(f.q), detail::to_doubles(f.r)};
    };
    auto probe = [](const Factors& f) {
        std::vector<double> diag;
        for (int k = 0; k < f.second.rows(); ++k) diag.push_back(f.second(k, k));
        return diag;
    };
    bool stabilized = false;
    auto [factors, bits] = detail::stabilize<Factors>(policy, solve, probe, stabilized);
    if (!stabilized) throw PrecisionExhausted("qr failed to stabilize within max_bits");
    return QrResult{std::move(factors.first), std::move(factors.second), bits};
}

/// Least squares min ||A c - f||_2 for l > n, via the full-Q route:
/// d = Q^T f, solve R c = d1, r = Q [0; d2], ||r|| = ||d2||.
inline LsqSolution least_squares(const BdMatrix<double>& bd, const Vector<double>& f,
                                 const PrecisionPolicy& policy = {}) {
    const int rows = bd.rows(), cols = bd.cols();
    if (rows <= cols) throw DimensionMismatch("least_squares requires more rows than columns");
    if (static_cast<int>(f.size()) != rows)
        throw DimensionMismatch("least_squares: data vector length must equal row count");

    auto solve = [&](int bits) -> std::optional<LsqSolution> {
        PrecisionScope scope(bits);
        auto a = expand(bd.cast<BigFloat>());
        auto fac = kernels::householder_qr(std::move(a));
        Vector<BigFloat> fb(f.begin(), f.end());

        Vector<BigFloat> d(rows, BigFloat(0));
        for (int i = 0; i < rows; ++i)
            for (int k = 0; k < rows; ++k) d[i] += fac.q(k, i) * fb[k];

        Vector<BigFloat> c(cols, BigFloat(0));
        for (int i = cols - 1; i >= 0; --i) {
            BigFloat acc = d[i];
            for (int j = i + 1; j < cols; ++j) acc -= fac.r(i, j) * c[j];
            c[i] = acc / fac.r(i, i);
        }

        Vector<BigFloat> rvec(rows, BigFloat(0));
        BigFloat nrm2(0);
        for (int i = 0; i < rows; ++i) {
            BigFloat acc(0);
            for (int k = cols; k < rows; ++k) acc += fac.q(i, k) * d[k];
            rvec[i] = acc;
        }
        for (int k = cols; k < rows; ++k) nrm2 += d[k] * d[k];

        LsqSolution out;
        out.coefficients = detail::to_doubles(c);
        out.residual = detail::to_doubles(rvec);
        out.residual_norm = sqrt(nrm2).convert_to<double>();
        return out;
    };
    auto probe = [](const LsqSolution& s) { return s.coefficients; };
    bool stabilized = false;
    auto [sol, bits] = detail::stabilize<LsqSolution>(policy, solve, probe, stabilized);
    if (!stabilized) throw PrecisionExhausted("least_squares failed to stabilize within max_bits");
    sol.achieved_bits = bits;
    return sol;
}

/// Conventional double-precision eigenvalue solver (Hessenberg + shifted QR).
/// No accuracy contract beyond backward stability; exists to expose the
/// relative-error blowup on ill-conditioned inputs.
inline Spectrum baseline_eigenvalues(const Matrix<double>& a) {
    if (a.rows() != a.cols()) throw NotSquare("baseline_eigenvalues requires a square matrix");
    auto vals = kernels::eigenvalues_qr(a, std::numeric_limits<double>::epsilon(),
                                        detail::kSweepFactor * a.rows());
    if (!vals) throw NoConvergence("double-precision eigenvalue iteration did not converge");
    return Spectrum{std::move(*vals), 53, true};
}

/// Conventional double-precision SVD (Golub-Kahan bidiagonalization +
/// implicit-shift QR).
inline Spectrum baseline_singular_values(const Matrix<double>& a) {
    auto vals = kernels::singular_values_qr(a, std::numeric_limits<double>::epsilon(),
                                            detail::kSweepFactor * std::max(a.rows(), a.cols()));
    if (!vals) throw NoConvergence("double-precision SVD iteration did not converge");
    return Spectrum{std::move(*vals), 53, true};
}

} // namespace bvtn
