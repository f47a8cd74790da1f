#ifndef GSHIFT_RATIONAL_HPP
#define GSHIFT_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gshift {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Exact power of two, positive or negative exponent.
inline Rational pow2(long e) {
  BigInt p = BigInt(1) << static_cast<unsigned>(e < 0 ? -e : e);
  return e < 0 ? Rational(1, p) : Rational(p, 1);
}

inline Rational pow_rational(const Rational& q, unsigned long e) {
  Rational r = 1;
  Rational base = q;
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

// Values of the form num * 2^{-exp2}.  Metric values and exit-set distances
// are always 0 or a pure power of two, so a small mantissa suffices.
struct Dyadic {
  std::int64_t num = 0;
  int exp2 = 0;

  static Dyadic zero() { return {0, 0}; }
  static Dyadic one() { return {1, 0}; }
  static Dyadic pow2_neg(int k) { return {1, k}; }

  bool is_zero() const { return num == 0; }
  Rational to_rational() const {
    if (num == 0) return Rational(0);
    return Rational(num) * pow2(-exp2);
  }
  std::string str() const {
    if (num == 0) return "0";
    if (exp2 == 0 && num == 1) return "1";
    if (num == 1) return "1/" + (BigInt(1) << exp2).str();
    return to_rational().str();
  }
};

inline bool operator==(const Dyadic& a, const Dyadic& b) {
  return a.to_rational() == b.to_rational();
}
inline bool operator<(const Dyadic& a, const Dyadic& b) {
  return a.to_rational() < b.to_rational();
}

// Closed rational interval; lo == hi when the value is exact.
struct RatInterval {
  Rational lo, hi;

  static RatInterval exact(const Rational& v) { return {v, v}; }
  bool is_exact() const { return lo == hi; }
  Rational width() const { return hi - lo; }
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }

  RatInterval& operator+=(const RatInterval& o) {
    lo += o.lo;
    hi += o.hi;
    return *this;
  }
};

inline RatInterval operator+(RatInterval a, const RatInterval& b) { return a += b; }

// "p/q" or "p"; used by the CLI for --eps and spec files for geometric weights.
inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt p(s.substr(0, slash));
    BigInt q(s.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("zero denominator");
    return Rational(p, q);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational: " + s);
  }
}

}  // namespace gshift

#endif
