#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace trop {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Natural logarithm of a positive big integer. Falls back to a
/// shift-and-rescale path once the value no longer fits a double.
double log_big(const BigInt& value);

/// Natural logarithm of a positive rational.
double log_rat(const Rat& value);

double to_double(const Rat& value);

/// −p·ln(p) for p in (0,1]; the summand of Shannon entropy in nats.
double entropy_term(const Rat& p);

Rat rat_pow(const Rat& base, unsigned exp);
BigInt binomial(unsigned n, unsigned k);

/// Parses "3/4" or "3". Throws ParseError on malformed input or
/// zero denominator.
Rat rat_from_string(std::string_view text);
std::string rat_to_string(const Rat& value);

/// Injective join of label components: escapes '\' and ',' in each
/// component, then joins with ','. Nested joins stay unambiguous.
std::string join_labels(std::string_view left, std::string_view right);
std::string join_labels(const std::vector<std::string>& parts);

}  // namespace trop
