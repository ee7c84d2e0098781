#pragma once

#include <cmath>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace bvtn {

/// Variable-precision float; precision is set per computation phase via
/// PrecisionScope, never mixed within one phase.  Expression templates are
/// off so these behave like ordinary value types in generic code.
using BigFloat = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                               boost::multiprecision::et_off>;

/// Exact rational scalar used by the oracle and the exact-mode kernels.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

inline unsigned digits10_for_bits(int bits) {
    // round up so the mpfr mantissa holds at least `bits` bits
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 2;
}

inline int bits_for_digits(int digits) {
    return static_cast<int>(std::ceil(digits * 3.3219280948873623)) + 10;
}

/// RAII switch of the default BigFloat working precision.
class PrecisionScope {
public:
    explicit PrecisionScope(int bits)
        : saved_(BigFloat::default_precision()) {
        BigFloat::default_precision(digits10_for_bits(bits));
    }
    ~PrecisionScope() { BigFloat::default_precision(saved_); }
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_;
};

} // namespace bvtn
