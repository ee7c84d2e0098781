#include <doctest.h>

#include <cmath>
#include <random>

#include "test_helpers.hpp"

using namespace bvtn;
namespace k = bvtn::kernels;

namespace {

Matrix<double> two_by_two() {
    Matrix<double> a(2, 2);
    a(0, 0) = 0.75;
    a(0, 1) = 0.25;
    a(1, 0) = 0.5;
    a(1, 1) = 0.5;
    return a;
}

Matrix<double> random_positive(std::mt19937_64& rng, int rows, int cols) {
    std::uniform_real_distribution<double> dist(0.05, 1.0);
    Matrix<double> a(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) a(i, j) = dist(rng);
    return a;
}

} // namespace

TEST_CASE("pythag matches hypot without overflow") {
    CHECK(k::pythag(3.0, 4.0) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(k::pythag(0.0, 0.0) == 0.0);
    CHECK(k::pythag(-3e200, 4e200) == doctest::Approx(5e200).epsilon(1e-14));
}

TEST_CASE("givens rotation annihilates the second component") {
    auto g = k::make_givens(1.0, 2.0);
    CHECK(-g.s * 1.0 + g.c * 2.0 == doctest::Approx(0.0));
    CHECK(g.c * g.c + g.s * g.s == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("householder qr of the 2x2 example") {
    auto f = k::householder_qr(two_by_two());
    const double s13 = std::sqrt(13.0);
    CHECK(f.r(0, 0) == doctest::Approx(s13 / 4).epsilon(1e-15));
    CHECK(f.r(0, 1) == doctest::Approx(7.0 / (4 * s13)).epsilon(1e-15));
    CHECK(f.r(1, 0) == 0.0);
    CHECK(f.r(1, 1) == doctest::Approx(1.0 / s13).epsilon(1e-14));
    CHECK(f.q(0, 0) == doctest::Approx(3.0 / s13).epsilon(1e-15));
    CHECK(f.q(1, 0) == doctest::Approx(2.0 / s13).epsilon(1e-15));
}

TEST_CASE("householder qr: orthogonality and reconstruction, rectangular") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 6; ++trial) {
        int rows = 3 + static_cast<int>(rng() % 8);
        int cols = 1 + static_cast<int>(rng() % rows);
        auto a = random_positive(rng, rows, cols);
        auto f = k::householder_qr(a);

        auto qtq = multiply(f.q.transposed(), f.q);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < rows; ++j)
                CHECK(std::abs(qtq(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-14 * rows);

        for (int i = 0; i < cols; ++i) {
            CHECK(f.r(i, i) > 0.0);
            for (int j = 0; j < i; ++j) CHECK(f.r(i, j) == 0.0);
        }

        // reconstruct with the thin part of q
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                double s = 0;
                for (int t = 0; t < cols; ++t) s += f.q(i, t) * f.r(t, j);
                CHECK(std::abs(s - a(i, j)) <= 1e-13);
            }
    }
}

TEST_CASE("householder qr rejects wide matrices") {
    CHECK_THROWS_AS(k::householder_qr(Matrix<double>(2, 3)), DimensionMismatch);
}

TEST_CASE("hessenberg reduction zeroes below the subdiagonal and keeps the spectrum") {
    std::mt19937_64 rng(42);
    auto a = random_positive(rng, 6, 6);
    auto h = k::hessenberg_reduce(a);
    for (int i = 2; i < 6; ++i)
        for (int j = 0; j + 1 < i; ++j) CHECK(h(i, j) == 0.0);

    double tr_a = 0, tr_h = 0;
    for (int i = 0; i < 6; ++i) {
        tr_a += a(i, i);
        tr_h += h(i, i);
    }
    CHECK(tr_h == doctest::Approx(tr_a).epsilon(1e-13));
}

TEST_CASE("trailing 2x2 eigenvalue helper") {
    auto p = k::real_eig_2x2(0.75, 0.25, 0.5, 0.5);
    REQUIRE(p.has_value());
    CHECK(p->first == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p->second == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_FALSE(k::real_eig_2x2(0.0, -1.0, 1.0, 0.0).has_value()); // rotation: complex pair
}

TEST_CASE("qr eigenvalue iteration on small matrices") {
    double eps = std::numeric_limits<double>::epsilon();
    auto vals = k::eigenvalues_qr(two_by_two(), eps, 1000);
    REQUIRE(vals.has_value());
    CHECK((*vals)[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((*vals)[1] == doctest::Approx(0.25).epsilon(1e-14));

    auto id = k::eigenvalues_qr(Matrix<double>::identity(3), eps, 1000);
    REQUIRE(id.has_value());
    for (double v : *id) CHECK(v == 1.0);

    Matrix<double> d(3, 3);
    d(0, 0) = 2.0;
    d(1, 1) = 0.5;
    d(2, 2) = 7.0;
    auto dv = k::eigenvalues_qr(d, eps, 1000);
    REQUIRE(dv.has_value());
    CHECK((*dv)[0] == doctest::Approx(7.0));
    CHECK((*dv)[1] == doctest::Approx(2.0));
    CHECK((*dv)[2] == doctest::Approx(0.5));
}

TEST_CASE("qr eigenvalue iteration reports failure instead of looping") {
    Matrix<double> rot(4, 4); // two disjoint rotations: fully complex spectrum
    rot(0, 1) = -1.0;
    rot(1, 0) = 1.0;
    rot(2, 3) = -1.0;
    rot(3, 2) = 1.0;
    auto vals = k::eigenvalues_qr(rot, std::numeric_limits<double>::epsilon(), 50);
    CHECK_FALSE(vals.has_value());
}

TEST_CASE("singular value iteration on the 2x2 example") {
    auto vals = k::singular_values_qr(two_by_two(), std::numeric_limits<double>::epsilon(), 1000);
    REQUIRE(vals.has_value());
    const double s1 = std::sqrt((9 + std::sqrt(65.0)) / 16);
    const double s2 = std::sqrt((9 - std::sqrt(65.0)) / 16);
    CHECK((*vals)[0] == doctest::Approx(s1).epsilon(1e-14));
    CHECK((*vals)[1] == doctest::Approx(s2).epsilon(1e-13));
}

TEST_CASE("singular values are transpose-invariant and match gram eigenvalues") {
    std::mt19937_64 rng(43);
    auto a = random_positive(rng, 7, 4);
    double eps = std::numeric_limits<double>::epsilon();
    auto sv = k::singular_values_qr(a, eps, 1000);
    auto svt = k::singular_values_qr(a.transposed(), eps, 1000);
    REQUIRE(sv.has_value());
    REQUIRE(svt.has_value());
    REQUIRE(sv->size() == 4);
    for (int i = 0; i < 4; ++i) CHECK((*sv)[i] == doctest::Approx((*svt)[i]).epsilon(1e-12));

    auto gram = multiply(a.transposed(), a);
    auto ev = k::eigenvalues_qr(gram, eps, 1000);
    REQUIRE(ev.has_value());
    for (int i = 0; i < 4; ++i)
        CHECK((*sv)[i] * (*sv)[i] == doctest::Approx((*ev)[i]).epsilon(1e-10));
}

TEST_CASE("kernels run unchanged in multiprecision floats") {
    PrecisionScope scope(212);
    Matrix<BigFloat> a(2, 2);
    a(0, 0) = BigFloat(3) / 4;
    a(0, 1) = BigFloat(1) / 4;
    a(1, 0) = BigFloat(1) / 2;
    a(1, 1) = BigFloat(1) / 2;
    BigFloat tol = boost::multiprecision::ldexp(BigFloat(1), -200);
    auto vals = k::eigenvalues_qr(a, tol, 1000);
    REQUIRE(vals.has_value());
    CHECK(abs((*vals)[0] - 1) < BigFloat(1e-60));
    CHECK(abs((*vals)[1] - BigFloat(1) / 4) < BigFloat(1e-60));
}
