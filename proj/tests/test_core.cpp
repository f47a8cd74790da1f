#include <doctest.h>

#include <random>

#include "gshift/core.hpp"

using namespace gshift;

namespace {

Point rand_point(std::mt19937_64& rng, Symbol cap = 1) {
  std::size_t plen = 1 + rng() % 3;
  std::size_t tlen = rng() % 4;
  std::vector<Symbol> p(plen), t(tlen);
  for (auto& s : p) s = rng() % (cap + 1);
  for (auto& s : t) s = rng() % (cap + 1);
  return Point(Word{std::move(p)}, Word{std::move(t)});
}

}  // namespace

TEST_CASE("word parsing and rendering") {
  CHECK(Word::parse("011") == Word{0, 1, 1});
  CHECK(Word::parse("10.3") == Word{10, 3});
  CHECK(Word{0, 1, 1}.str() == "011");
  CHECK(Word{10, 3}.str() == "10.3");
  CHECK_THROWS(Word::parse(""));
  CHECK_THROWS(Word::parse("1a"));
}

TEST_CASE("word_replace_last") {
  CHECK(word_replace_last(Word{0, 1}, 0) == Word{0, 0});
  CHECK(word_replace_last(Word{1, 1}, 1) == Word{1, 1});
  CHECK(word_replace_last(Word{0, 1, 2}, 3).size() == 3);
}

TEST_CASE("canonicalize") {
  // period "00" reduces to its primitive root
  CHECK(Point(Word{0, 0}) == Point(Word{0}));
  // transient absorbed into the tail
  CHECK(Point(Word{0}, Word{0}) == Point(Word{0}));
  // already canonical
  Point x(Word{0, 1}, Word{1});
  CHECK(x.period() == Word{0, 1});
  CHECK(x.transient() == Word{1});
  // idempotent
  CHECK(canonicalize(x) == x);
}

TEST_CASE("point_suffix") {
  CHECK(point_suffix(Point(Word{0}), 3) == Word{0, 0, 0});
  CHECK(point_suffix(Point(Word{0}, Word{1}), 2) == Word{0, 1});
  // the final period copy ends at position 0
  CHECK(point_suffix(Point(Word{0, 1}), 3) == Word{1, 0, 1});
}

TEST_CASE("metric examples") {
  Point zeros(Word{0});
  CHECK(metric(zeros, zeros).is_zero());
  CHECK(metric(zeros, Point(Word{0}, Word{1})) == Dyadic::one());
  // agree at positions 0 and -1, differ at -2
  Point a(Word{0}, Word{1, 0});
  Point b(Word{1}, Word{1, 0});
  CHECK(metric(a, b) == Dyadic::pow2_neg(2));
}

TEST_CASE("append and replace_last") {
  Point zeros(Word{0});
  CHECK(append(zeros, 1) == Point(Word{0}, Word{1}));
  CHECK(append(zeros, 0) == zeros);  // absorbed
  CHECK(replace_last(Point(Word{0}, Word{1}), 0) == zeros);

  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    Point x = rand_point(rng);
    Symbol a = rng() % 2, b = rng() % 2;
    CHECK(shift(append(x, a)) == x);
    CHECK(replace_last(x, x.at(0)) == x);
    CHECK(replace_last(append(x, a), b) == append(x, b));
    CHECK(append(shift(x), a) == replace_last(x, a));
  }
}

TEST_CASE("metric properties") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    Point x = rand_point(rng), y = rand_point(rng), z = rand_point(rng);
    Dyadic dxy = metric(x, y), dyx = metric(y, x);
    CHECK(dxy == dyx);
    CHECK((dxy.is_zero() == (x == y)));
    // ultrametric inequality
    Rational lhs = metric(x, z).to_rational();
    Rational rhs = std::max(dxy.to_rational(), metric(y, z).to_rational());
    CHECK(lhs <= rhs);
    // rho <= 2^-n iff the length-n suffixes agree
    for (std::size_t n = 1; n <= 4; ++n) {
      bool close = dxy.to_rational() <= pow2(-(long)n);
      CHECK(close == (point_suffix(x, n) == point_suffix(y, n)));
    }
  }
}

TEST_CASE("canonicalize preserves suffixes") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 100; ++i) {
    std::size_t plen = 1 + rng() % 3, tlen = rng() % 4;
    std::vector<Symbol> p(plen), t(tlen);
    for (auto& s : p) s = rng() % 2;
    for (auto& s : t) s = rng() % 2;
    // Read the raw representation directly, then compare against the
    // canonical point.
    auto raw_at = [&](long j) -> Symbol {
      std::size_t off = static_cast<std::size_t>(-j);
      if (off < t.size()) return t[t.size() - 1 - off];
      off -= t.size();
      return p[p.size() - 1 - off % p.size()];
    };
    Point x(Word{std::vector<Symbol>(p)}, Word{std::vector<Symbol>(t)});
    for (long j = 0; j > -12; --j) CHECK(x.at(j) == raw_at(j));
  }
}
