#pragma once

#include <cstdint>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace permsum {

using BigInt = boost::multiprecision::cpp_int;
/// Always normalized: lowest terms, positive denominator.
using Rational = boost::multiprecision::cpp_rational;
/// 50 significant digits; used for logs, square roots and bound values.
using Real = boost::multiprecision::cpp_dec_float_50;

inline BigInt numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rational& q) { return denominator_of(q) == 1; }

/// Accepts "[+-]digits" or "[+-]digits/digits". Anything else (decimals,
/// exponents, symbolic values) is rejected.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&](const char* why) {
    return ParseError("invalid rational \"" + std::string(text) + "\": " + why);
  };
  auto digits_only = [](std::string_view s) {
    if (s.empty()) return false;
    for (char ch : s)
      if (ch < '0' || ch > '9') return false;
    return true;
  };
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
  if (!digits_only(num) || !digits_only(den)) throw fail("expected an integer or p/q");
  BigInt p{std::string(num)};
  BigInt q{std::string(den)};
  if (q == 0) throw fail("zero denominator");
  if (negative) p = -p;
  return Rational(p, q);
}

/// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& q) { return q.str(); }
inline std::string to_string(const BigInt& z) { return z.str(); }

inline Real to_real(const Rational& q) {
  return Real(numerator_of(q)) / Real(denominator_of(q));
}

/// Fixed significant-digit rendering for diagnostics (never used for equality).
inline std::string to_decimal(const Real& x, int significant = 12) {
  std::ostringstream os;
  os << std::setprecision(significant) << x;
  return os.str();
}
inline std::string to_decimal(const Rational& q, int significant = 12) {
  return to_decimal(to_real(q), significant);
}

inline BigInt lcm_of_denominators(const std::vector<Rational>& values) {
  BigInt l = 1;
  for (const auto& v : values) l = boost::multiprecision::lcm(l, denominator_of(v));
  return l;
}

/// Rationals multiplied through by the lcm of their denominators.
struct IntegerScaling {
  std::vector<BigInt> values;
  BigInt scale = 1;
};

inline IntegerScaling scale_to_integers(const std::vector<Rational>& values) {
  IntegerScaling out;
  out.scale = lcm_of_denominators(values);
  out.values.reserve(values.size());
  for (const auto& v : values) out.values.push_back(numerator_of(v) * (out.scale / denominator_of(v)));
  return out;
}

inline BigInt max_abs(const std::vector<BigInt>& values) {
  BigInt m = 0;
  for (const auto& v : values) m = std::max(m, BigInt(abs(v)));
  return m;
}

/// True when every value fits in int64 with magnitude at most `limit`.
inline bool fits_within(const std::vector<BigInt>& values, const BigInt& limit) {
  return max_abs(values) <= limit;
}

inline std::vector<std::int64_t> narrow_to_int64(const std::vector<BigInt>& values) {
  std::vector<std::int64_t> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(v.convert_to<std::int64_t>());
  return out;
}

inline BigInt factorial(unsigned n) {
  BigInt f = 1;
  for (unsigned k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace permsum
