#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bvtn/bidiagonal.hpp"
#include "bvtn/errors.hpp"
#include "bvtn/matrix.hpp"
#include "bvtn/precision.hpp"

namespace bvtn::io {

struct ParseError : Error {
    using Error::Error;
};

/// Parse one numeric token: "p/q" rationals and decimal literals
/// (with optional exponent) are both read exactly.
inline Rational parse_rational(const std::string& token) {
    using boost::multiprecision::mpz_int;

    auto fail = [&]() -> Rational { throw ParseError("cannot parse number: '" + token + "'"); };

    auto slash = token.find('/');
    if (slash != std::string::npos) {
        try {
            mpz_int num(token.substr(0, slash));
            mpz_int den(token.substr(slash + 1));
            if (den == 0) return fail();
            return Rational(num, den);
        } catch (const std::exception&) {
            return fail();
        }
    }

    // decimal literal: [sign] digits [. digits] [e [sign] digits]
    std::size_t pos = 0;
    bool negative = false;
    if (pos < token.size() && (token[pos] == '+' || token[pos] == '-')) {
        negative = token[pos] == '-';
        ++pos;
    }
    mpz_int mantissa = 0;
    long frac_digits = 0;
    bool seen_digit = false, seen_point = false;
    for (; pos < token.size(); ++pos) {
        char c = token[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mantissa = mantissa * 10 + (c - '0');
            if (seen_point) ++frac_digits;
            seen_digit = true;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!seen_digit) return fail();
    long exponent = 0;
    if (pos < token.size() && (token[pos] == 'e' || token[pos] == 'E')) {
        try {
            std::size_t used = 0;
            exponent = std::stol(token.substr(pos + 1), &used);
            if (used != token.size() - pos - 1) return fail();
        } catch (const std::exception&) {
            return fail();
        }
    } else if (pos != token.size()) {
        return fail();
    }

    mpz_int num = mantissa, den = 1;
    long net = exponent - frac_digits;
    for (long i = 0; i < net; ++i) num *= 10;
    for (long i = 0; i < -net; ++i) den *= 10;
    Rational r(num, den);
    return negative ? -r : r;
}

/// Round-to-nearest double of an exact rational.
inline double to_double(const Rational& r) {
    PrecisionScope scope(53);
    return BigFloat(r).convert_to<double>();
}

struct ParsedNumbers {
    std::vector<Rational> exact;
    std::vector<double> rounded;
};

inline ParsedNumbers parse_numbers(const std::string& text) {
    ParsedNumbers out;
    std::istringstream is(text);
    std::string token;
    while (is >> token) {
        Rational r = parse_rational(token);
        out.exact.push_back(r);
        out.rounded.push_back(to_double(r));
    }
    return out;
}

inline ParsedNumbers parse_number_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_numbers(buf.str());
}

// --- JSON (doubles serialize with enough digits to round-trip exactly) ---

inline nlohmann::json to_json(const Matrix<double>& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(rows)}};
}

inline Matrix<double> matrix_from_json(const nlohmann::json& j) {
    int rows = j.at("rows").get<int>();
    int cols = j.at("cols").get<int>();
    Matrix<double> m(rows, cols);
    const auto& entries = j.at("entries");
    if (static_cast<int>(entries.size()) != rows) throw ParseError("json: row count mismatch");
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(entries[i].size()) != cols) throw ParseError("json: column count mismatch");
        for (int jj = 0; jj < cols; ++jj) m(i, jj) = entries[i][jj].get<double>();
    }
    return m;
}

inline nlohmann::json to_json(const BdMatrix<double>& bd) { return to_json(bd.packed()); }

inline BdMatrix<double> bd_from_json(const nlohmann::json& j) {
    return BdMatrix<double>(matrix_from_json(j));
}

} // namespace bvtn::io
