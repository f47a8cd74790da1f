#include "gshift/core.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace gshift {

Word Word::suffix(std::size_t n) const {
  if (n > syms_.size()) throw std::out_of_range("Word::suffix: n exceeds length");
  return Word(std::vector<Symbol>(syms_.end() - n, syms_.end()));
}

Word Word::drop_last() const {
  if (syms_.empty()) throw std::out_of_range("Word::drop_last on empty word");
  return Word(std::vector<Symbol>(syms_.begin(), syms_.end() - 1));
}

bool Word::ends_with(const Word& w) const {
  if (w.size() > size()) return false;
  return std::equal(w.syms_.begin(), w.syms_.end(), syms_.end() - w.size());
}

bool Word::contains_factor(const Word& w) const {
  if (w.empty() || w.size() > size()) return false;
  auto it = std::search(syms_.begin(), syms_.end(), w.syms_.begin(), w.syms_.end());
  return it != syms_.end();
}

std::string Word::str() const {
  bool wide = std::any_of(syms_.begin(), syms_.end(), [](Symbol s) { return s >= 10; });
  std::ostringstream out;
  for (std::size_t i = 0; i < syms_.size(); ++i) {
    if (wide && i) out << '.';
    out << syms_[i];
  }
  return out.str();
}

Word Word::parse(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty word");
  std::vector<Symbol> syms;
  if (text.find('.') != std::string::npos) {
    std::istringstream in(text);
    std::string part;
    while (std::getline(in, part, '.')) {
      if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("malformed word: " + text);
      syms.push_back(static_cast<Symbol>(std::stoul(part)));
    }
  } else {
    for (char c : text) {
      if (c < '0' || c > '9') throw std::invalid_argument("malformed word: " + text);
      syms.push_back(static_cast<Symbol>(c - '0'));
    }
  }
  return Word(std::move(syms));
}

Word word_replace_last(const Word& w, Symbol a) {
  if (w.empty()) throw std::invalid_argument("word_replace_last on empty word");
  std::vector<Symbol> syms = w.symbols();
  syms.back() = a;
  return Word(std::move(syms));
}

Word LeftSeq::suffix(std::size_t n) const {
  std::vector<Symbol> syms(n);
  for (std::size_t i = 0; i < n; ++i)
    syms[i] = at(-static_cast<long>(n - 1 - i));
  return Word(std::move(syms));
}

namespace {

// Smallest u with w = u^k; classic failure-function computation.
Word primitive_root(const Word& w) {
  const auto& s = w.symbols();
  std::size_t n = s.size();
  std::vector<std::size_t> fail(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t j = fail[i - 1];
    while (j && s[i] != s[j]) j = fail[j - 1];
    if (s[i] == s[j]) ++j;
    fail[i] = j;
  }
  std::size_t p = n - fail[n - 1];
  if (n % p == 0)
    return Word(std::vector<Symbol>(s.begin(), s.begin() + p));
  return w;
}

Word rotate_left(const Word& w) {
  std::vector<Symbol> s = w.symbols();
  std::rotate(s.begin(), s.begin() + 1, s.end());
  return Word(std::move(s));
}

}  // namespace

Point::Point(Word period, Word transient)
    : period_(std::move(period)), transient_(std::move(transient)) {
  if (period_.empty()) throw std::invalid_argument("Point: empty period");
  period_ = primitive_root(period_);
  // Absorb leading transient symbols that continue the periodic tail.
  // ...PP | p0 t  ==  ...P'P' | t  with P' the left rotation of P.
  std::vector<Symbol> t = transient_.symbols();
  std::size_t cut = 0;
  while (cut < t.size() && t[cut] == period_.front()) {
    period_ = rotate_left(period_);
    ++cut;
  }
  transient_ = Word(std::vector<Symbol>(t.begin() + cut, t.end()));
}

Symbol Point::at(long j) const {
  long t = static_cast<long>(transient_.size());
  if (-j < t) return transient_.at(j);
  long p = static_cast<long>(period_.size());
  long into = (-j - t) % p;  // 0 => last symbol of the period
  return period_.at(-into);
}

bool Point::operator<(const Point& o) const {
  if (WordShortlex{}(period_, o.period_)) return true;
  if (WordShortlex{}(o.period_, period_)) return false;
  return WordShortlex{}(transient_, o.transient_);
}

std::string Point::str() const {
  auto wide_syms = [](const Word& w) {
    return std::any_of(w.symbols().begin(), w.symbols().end(),
                       [](Symbol s) { return s >= 10; });
  };
  bool wide = wide_syms(period_) || wide_syms(transient_);
  std::string out = "...";
  for (int i = 0; i < 3; ++i) {
    out += period_.str();
    if (wide && (i < 2 || !transient_.empty())) out += '.';
  }
  if (!transient_.empty()) out += transient_.str();
  return out;
}

Point canonicalize(const Point& x) { return Point(x.period(), x.transient()); }

Word point_suffix(const LeftSeq& x, std::size_t n) {
  if (n == 0) throw std::invalid_argument("point_suffix: n must be >= 1");
  return x.suffix(n);
}

Point append(const Point& x, Symbol a) {
  Word t = x.transient();
  t.push_back(a);
  return Point(x.period(), t);
}

Point replace_last(const Point& x, Symbol a) { return append(shift(x), a); }

Point shift(const Point& x) {
  if (!x.transient().empty()) return Point(x.period(), x.transient().drop_last());
  // Transient empty: peel the last period symbol instead.
  const Word& p = x.period();
  std::vector<Symbol> rot = p.symbols();
  std::rotate(rot.begin(), rot.end() - 1, rot.end());
  return Point(Word(std::move(rot)));
}

Dyadic metric(const Point& x, const Point& y) {
  if (x == y) return Dyadic::zero();
  // Distinct canonical forms must disagree within one combined period
  // past both transients.
  long tmax = static_cast<long>(std::max(x.transient().size(), y.transient().size()));
  long l = static_cast<long>(std::lcm(x.period().size(), y.period().size()));
  long bound = tmax + l + 1;
  for (long j = 0; j <= bound; ++j)
    if (x.at(-j) != y.at(-j)) return Dyadic::pow2_neg(static_cast<int>(j));
  throw std::logic_error("metric: canonical forms compare equal symbol-wise");
}

}  // namespace gshift
