#include <doctest.h>

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "test_helpers.hpp"

using namespace bvtn;

TEST_CASE("rational tokens parse exactly") {
    CHECK(io::parse_rational("1/3") == Rational(1, 3));
    CHECK(io::parse_rational("-7/2") == Rational(-7, 2));
    CHECK(io::parse_rational("0.25") == Rational(1, 4));
    CHECK(io::parse_rational("2.5e-1") == Rational(1, 4));
    CHECK(io::parse_rational("25E-2") == Rational(1, 4));
    CHECK(io::parse_rational("-0.1") == Rational(-1, 10));
    CHECK(io::parse_rational("3") == Rational(3));
    CHECK(io::parse_rational("1e3") == Rational(1000));
    CHECK(io::parse_rational(".5") == Rational(1, 2));
}

TEST_CASE("malformed tokens are rejected") {
    for (const char* bad : {"", "abc", "1/0", "1//2", "1.2.3", "1e", "0x10", "1 2"})
        CHECK_THROWS_AS(io::parse_rational(bad), io::ParseError);
}

TEST_CASE("rounding to double is correct to the last bit") {
    CHECK(io::to_double(Rational(1, 3)) == 1.0 / 3.0);
    CHECK(io::to_double(Rational(1, 10)) == 0.1);
    CHECK(io::to_double(Rational(2, 3)) == 2.0 / 3.0);
    CHECK(io::to_double(Rational(1, 4)) == 0.25);
}

TEST_CASE("whitespace-separated number lists") {
    auto parsed = io::parse_numbers("1/4 0.5\n3/4");
    REQUIRE(parsed.exact.size() == 3);
    CHECK(parsed.exact[1] == Rational(1, 2));
    CHECK(parsed.rounded == std::vector<double>{0.25, 0.5, 0.75});
}

TEST_CASE("number files") {
    const char* path = "bvtn_io_test_nodes.txt";
    {
        std::ofstream out(path);
        out << "1/22  1/20\n1/18\n";
    }
    auto parsed = io::parse_number_file(path);
    std::remove(path);
    REQUIRE(parsed.exact.size() == 3);
    CHECK(parsed.exact[0] == Rational(1, 22));
    CHECK_THROWS_AS(io::parse_number_file("definitely-missing-file.txt"), io::ParseError);
}

TEST_CASE("matrix json round trip is bit exact") {
    Matrix<double> m(2, 3);
    m(0, 0) = 1.0 / 3.0;
    m(0, 1) = 0.1;
    m(0, 2) = 1e-300;
    m(1, 0) = -2.0 / 7.0;
    m(1, 1) = 1.0;
    m(1, 2) = 12345.6789;
    auto j = nlohmann::json::parse(io::to_json(m).dump());
    CHECK(io::matrix_from_json(j) == m);
}

TEST_CASE("bd json round trip") {
    auto bd = compute_bd(validate_nodes<double>({0.25, 0.5, 0.75}), 2);
    auto j = nlohmann::json::parse(io::to_json(bd).dump());
    CHECK(io::bd_from_json(j) == bd);
}

TEST_CASE("json shape mismatches are reported") {
    nlohmann::json j = {{"rows", 2}, {"cols", 2}, {"entries", {{1.0, 2.0}}}};
    CHECK_THROWS_AS(io::matrix_from_json(j), io::ParseError);
    nlohmann::json ragged = {{"rows", 1}, {"cols", 2}, {"entries", {{1.0}}}};
    CHECK_THROWS_AS(io::matrix_from_json(ragged), io::ParseError);
}
