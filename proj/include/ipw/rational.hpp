#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace ipw {

// Exact arbitrary-precision arithmetic. No floating point anywhere in the
// library: cohomology dimensions are rank computations and must be exact.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

} // namespace ipw
