#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace causalkit {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Accepts "3", "-1/2", "22/7". Throws std::invalid_argument on anything else.
Rational parse_rational(const std::string& text);

// Always "num/den": "1/4", "1/1", "-3/2".
std::string format_fraction(const Rational& r);

// Shortest form: "3" when the value is integral, otherwise "num/den".
std::string format_number(const Rational& r);

}  // namespace causalkit
