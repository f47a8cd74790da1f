#ifndef GSHIFT_CORE_HPP
#define GSHIFT_CORE_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gshift/rational.hpp"

namespace gshift {

// Alphabet symbols are canonical non-negative integers.  For a finite
// alphabet of size n only 0..n-1 are valid; countable alphabets admit any
// value.
using Symbol = std::uint32_t;

// A finite block of symbols, right-aligned: the last entry sits at
// position 0, the previous at -1, and so on.  Most spec-level operations
// require length >= 1; the empty word appears only as an internal option
// (empty transient, the degenerate class word of depth-1 certificates).
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Symbol> syms) : syms_(std::move(syms)) {}
  Word(std::initializer_list<Symbol> syms) : syms_(syms) {}

  std::size_t size() const { return syms_.size(); }
  bool empty() const { return syms_.empty(); }

  // j <= 0, counting from the right end: at(0) is the last symbol.
  Symbol at(long j) const { return syms_[syms_.size() - 1 + j]; }
  Symbol operator[](std::size_t i) const { return syms_[i]; }
  Symbol front() const { return syms_.front(); }
  Symbol back() const { return syms_.back(); }

  const std::vector<Symbol>& symbols() const { return syms_; }

  Word suffix(std::size_t n) const;
  Word drop_last() const;
  void push_back(Symbol a) { syms_.push_back(a); }

  bool ends_with(const Word& w) const;
  bool contains_factor(const Word& w) const;

  auto operator<=>(const Word&) const = default;

  // Digits, dot-separated when any symbol needs more than one digit.
  std::string str() const;
  static Word parse(const std::string& text);

 private:
  std::vector<Symbol> syms_;
};

// Replace the final symbol, keeping the length.
Word word_replace_last(const Word& w, Symbol a);

// Ordering by length, then lexicographic; keeps report output stable.
struct WordShortlex {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.symbols() < b.symbols();
  }
};

// Read-only view of a left-infinite sequence ending at position 0.
// Point implements it exactly; the simulator implements it over a grown
// symbol path without re-canonicalizing on every append.
struct LeftSeq {
  virtual ~LeftSeq() = default;
  virtual Symbol at(long j) const = 0;  // j <= 0
  Word suffix(std::size_t n) const;
};

// Eventually periodic left-infinite sequence ...PPP|T with the transient T
// ending at position 0.  Construction canonicalizes: the period is
// primitive and the transient is minimal, so value equality is
// representation equality.
class Point final : public LeftSeq {
 public:
  Point(Word period, Word transient);
  explicit Point(Word period) : Point(std::move(period), Word{}) {}

  const Word& period() const { return period_; }
  const Word& transient() const { return transient_; }

  Symbol at(long j) const override;

  using LeftSeq::suffix;

  bool operator==(const Point& o) const {
    return period_ == o.period_ && transient_ == o.transient_;
  }
  bool operator!=(const Point& o) const { return !(*this == o); }
  bool operator<(const Point& o) const;

  std::string str() const;

 private:
  Word period_;
  Word transient_;
};

// The canonical representative of x; idempotent.  Point's constructor
// already applies this, so the free function mostly serves tests.
Point canonicalize(const Point& x);

// The length-n word at positions -n+1..0.
Word point_suffix(const LeftSeq& x, std::size_t n);

// (x, a): shifts x one step left and puts a at position 0.
Point append(const Point& x, Symbol a);

// x^{*,a}: x with position 0 replaced by a.
Point replace_last(const Point& x, Symbol a);

// Theta: drop the position-0 symbol.
Point shift(const Point& x);

// rho(x, y) = 0 if x == y, else 2^{-l} with l the least |j| where they
// differ.  Ultrametric, bounded by 1.
Dyadic metric(const Point& x, const Point& y);

}  // namespace gshift

#endif
