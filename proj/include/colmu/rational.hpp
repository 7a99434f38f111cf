#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace colmu {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// "n/d" or "n"; throws std::invalid_argument on malformed text or zero denominator.
Rational parse_rational(const std::string& text);

// Reduced "n/d", or "n" when the denominator is 1.
std::string format_rational(const Rational& q);

BigInt floor_of(const Rational& q);
BigInt ceil_of(const Rational& q);

}  // namespace colmu
