#include <doctest.h>

#include <cmath>
#include <random>

#include "test_helpers.hpp"

using namespace bvtn;
using bvtn::testing::experiment_nodes;
using bvtn::testing::random_double_nodes;
using bvtn::testing::random_rational_nodes;
using bvtn::testing::rounded_bd;

TEST_CASE("expand recovers the 2x2 collocation matrix exactly") {
    auto nodes = validate_nodes<Rational>({Rational(1, 4), Rational(1, 2)});
    auto a = expand(compute_bd(nodes, 1));
    CHECK(a(0, 0) == Rational(3, 4));
    CHECK(a(0, 1) == Rational(1, 4));
    CHECK(a(1, 0) == Rational(1, 2));
    CHECK(a(1, 1) == Rational(1, 2));
}

TEST_CASE("expand of the 1x1 decomposition is [1]") {
    auto a = expand(compute_bd(validate_nodes<double>({0.6}), 0));
    CHECK(a.rows() == 1);
    CHECK(a(0, 0) == 1.0);
}

TEST_CASE("expansion equals the direct evaluation, exact rationals, rectangular") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 8; ++trial) {
        int count = 3 + static_cast<int>(rng() % 6);
        int degree = static_cast<int>(rng() % count);
        auto nodes = random_rational_nodes(rng, count);
        CHECK(expand(compute_bd(nodes, degree)) == oracle::bernstein_matrix(nodes, degree));
    }
}

TEST_CASE("expanded rows sum to one") {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 10; ++trial) {
        int count = 2 + static_cast<int>(rng() % 15);
        int degree = static_cast<int>(rng() % count);
        auto a = expand(compute_bd(random_double_nodes(rng, count), degree));
        const double u = std::ldexp(1.0, -53);
        const double bound = (a.rows() - 1 + degree) * u + u;
        for (int i = 0; i < a.rows(); ++i) {
            double s = 0;
            for (int j = 0; j < a.cols(); ++j) s += a(i, j);
            CHECK(std::abs(s - 1.0) <= bound);
        }
    }
}

TEST_CASE("matvec basics") {
    auto bd = compute_bd(validate_nodes<double>({0.25, 0.5}), 1);
    auto col0 = matvec(bd, {1.0, 0.0});
    CHECK(col0[0] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(col0[1] == doctest::Approx(0.5).epsilon(1e-15));
    auto ones = matvec(bd, {1.0, 1.0});
    CHECK(ones[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ones[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(matvec(bd, {0.0, 0.0}) == Vector<double>{0.0, 0.0});
    CHECK_THROWS_AS(matvec(bd, {1.0, 2.0, 3.0}), DimensionMismatch);
}

TEST_CASE("matvec maps ones to ones on rectangular instances") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 10; ++trial) {
        int count = 2 + static_cast<int>(rng() % 10);
        int degree = static_cast<int>(rng() % count);
        auto bd = compute_bd(random_double_nodes(rng, count), degree);
        auto y = matvec(bd, Vector<double>(bd.cols(), 1.0));
        const double u = std::ldexp(1.0, -53);
        for (double v : y) CHECK(std::abs(v - 1.0) <= (count + degree) * u);
    }
}

TEST_CASE("determinant of the 2x2 example") {
    auto nodes = validate_nodes<Rational>({Rational(1, 4), Rational(1, 2)});
    CHECK(determinant(compute_bd(nodes, 1)) == Rational(1, 4));
    CHECK(determinant(compute_bd(validate_nodes<double>({0.9}), 0)) == 1.0);
}

TEST_CASE("double determinant of the order-21 experiment matrix") {
    auto nodes = experiment_nodes();
    Rational exact = determinant(compute_bd(nodes, 20));
    double approx = determinant(rounded_bd(compute_bd(nodes, 20)));
    double ref = io::to_double(exact);
    CHECK(std::abs(approx - ref) <= 1e-13 * std::abs(ref));
}

TEST_CASE("solve reproduces the exact 2x2 inverse") {
    auto bd = compute_bd(validate_nodes<Rational>({Rational(1, 4), Rational(1, 2)}), 1);
    CHECK(solve_system(bd, {Rational(1), Rational(0)}) == Vector<Rational>{Rational(2), Rational(-2)});
    CHECK(solve_system(bd, {Rational(0), Rational(1)}) == Vector<Rational>{Rational(-1), Rational(3)});
}

TEST_CASE("solve with an all-ones right-hand side returns ones") {
    std::mt19937_64 rng(34);
    for (int trial = 0; trial < 8; ++trial) {
        int count = 2 + static_cast<int>(rng() % 10);
        auto bd = compute_bd(random_double_nodes(rng, count), count - 1);
        // the inverse has alternating signs, so a same-sign rhs cancels; the
        // deviation grows with the conditioning but stays far below 1
        auto x = solve_system(bd, Vector<double>(count, 1.0));
        for (double v : x) CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("solve residual is small relative to the solution") {
    std::mt19937_64 rng(35);
    auto nodes = random_double_nodes(rng, 8);
    auto bd = compute_bd(nodes, 7);
    Vector<double> b(8);
    for (int i = 0; i < 8; ++i) b[i] = (i % 2 == 0) ? 1.0 : -1.0;
    auto x = solve_system(bd, b);
    auto back = matvec(bd, x);
    double xmax = 0;
    for (double v : x) xmax = std::max(xmax, std::abs(v));
    for (int i = 0; i < 8; ++i) CHECK(std::abs(back[i] - b[i]) <= 1e-12 * xmax);
}

TEST_CASE("square-only operations reject rectangular input") {
    auto bd = compute_bd(validate_nodes<double>({0.2, 0.4, 0.6}), 1);
    CHECK_THROWS_AS(determinant(bd), NotSquare);
    CHECK_THROWS_AS(solve_system(bd, {1.0, 1.0}), NotSquare);
    auto sq = compute_bd(validate_nodes<double>({0.2, 0.4}), 1);
    CHECK_THROWS_AS(solve_system(sq, {1.0, 1.0, 1.0}), DimensionMismatch);
}
