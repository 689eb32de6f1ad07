#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace tangle {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Prints "p" when the denominator is 1, otherwise "p/q" with q > 0.
std::string rat_str(const Rat& r);

// Accepts "p" or "p/q" with optional leading '-'. Rejects q == 0.
std::optional<Rat> parse_rat(std::string_view s);

Rat rat_pow(const Rat& base, unsigned exp);

double rat_double(const Rat& r);

}  // namespace tangle
