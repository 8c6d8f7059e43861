#include "trop/rational.hpp"

#include "trop/error.hpp"

#include <boost/multiprecision/integer.hpp>

#include <cmath>
#include <charconv>

namespace trop {

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

double log_big(const BigInt& value) {
  if (value <= 0) fail(Errc::internal, "log_big of non-positive value");
  const auto bits = boost::multiprecision::msb(value);
  if (bits < 512) return std::log(value.convert_to<double>());
  BigInt shifted = value >> (bits - 400);
  return std::log(shifted.convert_to<double>()) +
         static_cast<double>(bits - 400) * kLn2;
}

double log_rat(const Rat& value) {
  if (value <= 0) fail(Errc::internal, "log_rat of non-positive value");
  return log_big(numerator(value)) - log_big(denominator(value));
}

double to_double(const Rat& value) { return value.convert_to<double>(); }

double entropy_term(const Rat& p) {
  if (p == 1) return 0.0;
  return to_double(p) * (log_big(denominator(p)) - log_big(numerator(p)));
}

Rat rat_pow(const Rat& base, unsigned exp) {
  Rat result = 1;
  Rat acc = base;
  while (exp != 0) {
    if (exp & 1u) result *= acc;
    exp >>= 1u;
    if (exp != 0) acc *= acc;
  }
  return result;
}

BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (unsigned i = 0; i < k; ++i) {
    result *= n - i;
    result /= i + 1;
  }
  return result;
}

Rat rat_from_string(std::string_view text) {
  auto parse_int = [](std::string_view part) -> BigInt {
    if (part.empty()) fail(Errc::parse_error, "empty integer in rational");
    std::size_t start = part[0] == '-' ? 1 : 0;
    if (start == part.size())
      fail(Errc::parse_error, "malformed integer in rational");
    for (std::size_t i = start; i < part.size(); ++i) {
      if (part[i] < '0' || part[i] > '9')
        fail(Errc::parse_error,
             "malformed integer '" + std::string(part) + "' in rational");
    }
    return BigInt(std::string(part));
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rat(parse_int(text));
  BigInt num = parse_int(text.substr(0, slash));
  BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0) fail(Errc::parse_error, "zero denominator in rational");
  return Rat(num, den);
}

std::string rat_to_string(const Rat& value) {
  if (denominator(value) == 1) return numerator(value).str();
  return numerator(value).str() + "/" + denominator(value).str();
}

namespace {
void append_escaped(std::string& out, std::string_view part) {
  for (char c : part) {
    if (c == '\\' || c == ',') out += '\\';
    out += c;
  }
}
}  // namespace

std::string join_labels(std::string_view left, std::string_view right) {
  std::string out;
  out.reserve(left.size() + right.size() + 1);
  append_escaped(out, left);
  out += ',';
  append_escaped(out, right);
  return out;
}

std::string join_labels(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i != 0) out += ',';
    append_escaped(out, parts[i]);
  }
  return out;
}

}  // namespace trop
