#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace derivcheck {

// Exact rational with arbitrary-precision numerator and denominator.
using Rational = boost::multiprecision::mpq_rational;

// Parses "12", "-4", "12.75" or "1/3" exactly. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

// Integers print bare, terminating decimals as "12.75", everything else as "1/3".
std::string format_rational(const Rational& value);

bool is_integer(const Rational& value);

// Sorted copy; the canonical form of a solution multiset.
std::vector<Rational> sorted_values(std::vector<Rational> values);

}  // namespace derivcheck
