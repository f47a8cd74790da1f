#include "gshift/exitset.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace gshift {

namespace {

bool ends_with_suffix_of(const Word& w, const Word& f) {
  // Does w end with f (short f) or does f end with w (overhanging f)?
  if (f.size() <= w.size()) return w.ends_with(f);
  return f.ends_with(w);
}

// Witness test against one candidate forbidden word f: the exit point
// ends with the longer of (w, f); the part before its last symbol must be
// a K-suffix.
bool witness_via(const SubshiftSpec& spec, const Word& w, const Word& f) {
  if (!ends_with_suffix_of(w, f)) return false;
  const Word& longer = f.size() > w.size() ? f : w;
  return spec.suffix_ok(longer.drop_last());
}

std::size_t trailing_zeros(const Word& w) {
  std::size_t r = 0;
  for (auto it = w.symbols().rbegin(); it != w.symbols().rend() && *it == 0; ++it) ++r;
  return r;
}

bool sr_allowed(const SymbolRule& sr, Symbol a) {
  return std::binary_search(sr.allowed.begin(), sr.allowed.end(), a);
}

// The unique expanded family word ending with symbol a, if any.
std::optional<Word> df_completion(const DisjointFamilies& df, Symbol a) {
  Symbol o = df.offset_of(a);
  for (std::size_t i = 0; i < df.generators.size(); ++i)
    if (df.generators[i].back() == o) return df.expand(i, df.block_of(a));
  return std::nullopt;
}

// Does some forbidden pattern end exactly at position 0 of x?
bool violation_at_origin(const SubshiftSpec& spec, const Point& x) {
  switch (spec.kind()) {
    case SubshiftSpec::Kind::FiniteForbidden:
      for (const Word& f : spec.ff().forbidden)
        if (point_suffix(x, f.size()) == f) return true;
      return false;
    case SubshiftSpec::Kind::SymbolRule: {
      if (!sr_allowed(spec.sr(), x.at(0))) return true;
      for (const Word& f : spec.sr().overlay)
        if (point_suffix(x, f.size()) == f) return true;
      return false;
    }
    case SubshiftSpec::Kind::DisjointFamilies: {
      auto f = df_completion(spec.df(), x.at(0));
      return f && point_suffix(x, f->size()) == *f;
    }
    case SubshiftSpec::Kind::EvenShift:
      throw std::logic_error("even shift handled separately");
  }
  return false;
}

// Length of the 0-run at positions -1, -2, ... of x; nullopt when the run
// never ends (all-zero tail).
std::optional<std::size_t> even_run_before_last(const Point& x) {
  std::size_t bound = x.transient().size() + x.period().size() + 1;
  for (std::size_t r = 0; r < bound; ++r)
    if (x.at(-1 - static_cast<long>(r)) == 1) return r;
  // Scanned past one full period without a 1: the tail is all zeros.
  return std::nullopt;
}

std::size_t scan_bound(const SubshiftSpec& spec, const Point& x) {
  std::size_t t = x.transient().size(), p = x.period().size();
  std::size_t extra = spec.max_forbidden_len();
  if (spec.kind() == SubshiftSpec::Kind::DisjointFamilies) {
    if (auto f = df_completion(spec.df(), x.at(0))) extra = f->size();
  }
  return t + 3 * p + extra + 6;
}

}  // namespace

WitnessTable::WitnessTable(SubshiftSpec spec, std::size_t probe_depth)
    : spec_(std::move(spec)), depth_(probe_depth) {
  if (probe_depth == 0) throw InvalidUsage("probe depth must be >= 1");
  if (spec_.kind() == SubshiftSpec::Kind::FiniteForbidden)
    essential_vertices_ = spec_.essential_graph().vertices.size();
}

bool WitnessTable::is_witness(const Word& w) const { return is_exit_witness(spec_, w); }

bool is_exit_witness(const SubshiftSpec& spec, const Word& w) {
  if (w.empty()) throw InvalidUsage("witness words are nonempty");
  switch (spec.kind()) {
    case SubshiftSpec::Kind::FiniteForbidden: {
      for (const Word& f : spec.ff().forbidden)
        if (witness_via(spec, w, f)) return true;
      return false;
    }
    case SubshiftSpec::Kind::EvenShift: {
      if (w.back() != 1) return false;
      Word head = w.drop_last();
      bool has_one = std::find(head.symbols().begin(), head.symbols().end(), Symbol(1)) !=
                     head.symbols().end();
      if (!has_one) return true;  // the run may close at any odd depth
      return spec.factor_admissible(head) && trailing_zeros(head) % 2 == 1;
    }
    case SubshiftSpec::Kind::SymbolRule: {
      if (!sr_allowed(spec.sr(), w.back())) return spec.suffix_ok(w.drop_last());
      for (const Word& f : spec.sr().overlay)
        if (witness_via(spec, w, f)) return true;
      return false;
    }
    case SubshiftSpec::Kind::DisjointFamilies: {
      auto f = df_completion(spec.df(), w.back());
      return f && witness_via(spec, w, *f);
    }
  }
  return false;
}

std::vector<Word> WitnessTable::witnesses(std::size_t m, Symbol horizon) const {
  if (m == 0 || m > depth_) throw InvalidUsage("witness depth out of range");
  std::vector<Word> out;
  std::vector<Symbol> symbols = spec_.symbols_up_to(horizon);
  if (m == 1) {
    for (Symbol a : symbols) {
      Word w{a};
      if (is_witness(w)) out.push_back(w);
    }
    return out;
  }
  for (const Word& v : spec_.suffix_language(m - 1, horizon)) {
    for (Symbol a : symbols) {
      std::vector<Symbol> syms = v.symbols();
      syms.push_back(a);
      Word w{std::move(syms)};
      if (is_witness(w)) out.push_back(w);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

CertStatus WitnessTable::status(std::size_t m) const {
  if (spec_.kind() == SubshiftSpec::Kind::FiniteForbidden &&
      depth_ >= m + essential_vertices_)
    return CertStatus::Exact;
  return CertStatus::DepthBounded;
}

bool closure_member(const SubshiftSpec& spec, const Point& x) {
  if (spec.kind() == SubshiftSpec::Kind::EvenShift) {
    if (x.at(0) != 1) return false;
    auto run = even_run_before_last(x);
    if (!run) return true;  // ...0001, the limit of longer and longer odd runs
    return *run % 2 == 1 && spec.contains(shift(x));
  }
  return violation_at_origin(spec, x) && spec.contains(shift(x));
}

std::optional<std::size_t> max_witness_depth(const SubshiftSpec& spec, const Point& x) {
  if (closure_member(spec, x)) return std::nullopt;
  std::size_t bound = scan_bound(spec, x);
  for (std::size_t m = 1; m <= bound; ++m)
    if (!is_exit_witness(spec, point_suffix(x, m))) return m - 1;
  throw std::logic_error("witness scan exceeded its certified bound");
}

Dyadic distance_to_exit(const WitnessTable& table, const Point& x) {
  auto k = max_witness_depth(table.spec(), x);
  if (!k) return Dyadic::zero();
  return *k == 0 ? Dyadic::one() : Dyadic::pow2_neg(static_cast<int>(*k));
}

NValue n_of_x(const WitnessTable& table, const Point& x) {
  auto k = max_witness_depth(table.spec(), x);
  if (!k) return NValue::infinite();
  return NValue::of(std::max<std::size_t>(1, *k));
}

std::vector<Symbol> delta_plus(const WitnessTable& table, const Point& x, Symbol horizon) {
  std::vector<Symbol> out;
  for (Symbol a : table.spec().symbols_up_to(horizon))
    if (!closure_member(table.spec(), append(x, a))) out.push_back(a);
  return out;
}

namespace {

// Deterministic sweep of short eventually periodic points, shortlex in
// (period, transient).
template <typename Fn>
void for_small_points(const std::vector<Symbol>& symbols, std::size_t max_len, Fn&& fn) {
  std::vector<Word> words_by_len[1 + 8];
  std::size_t cap = std::min<std::size_t>(max_len, 8);
  words_by_len[0].push_back(Word{});
  for (std::size_t len = 1; len <= cap; ++len)
    for (const Word& w : words_by_len[len - 1])
      for (Symbol a : symbols) {
        std::vector<Symbol> syms = w.symbols();
        syms.push_back(a);
        words_by_len[len].push_back(Word{std::move(syms)});
      }
  std::set<Point> seen;
  for (std::size_t plen = 1; plen <= cap; ++plen)
    for (const Word& p : words_by_len[plen])
      for (std::size_t tlen = 0; tlen <= cap; ++tlen)
        for (const Word& t : words_by_len[tlen]) {
          Point x(p, t);
          if (!seen.insert(x).second) continue;
          if (fn(x)) return;
        }
}

}  // namespace

ClosureVerdict closure_meets_K(const WitnessTable& table) {
  const SubshiftSpec& spec = table.spec();
  std::size_t N = table.probe_depth();

  // Disjointness: the first depth where no suffix-language word is a
  // witness separates K from closure(E_K).  Families are skipped: their
  // suffix language cannot be exhausted at any symbol horizon.
  if (spec.kind() != SubshiftSpec::Kind::DisjointFamilies) {
    for (std::size_t M = 1; M <= N; ++M) {
      bool meets = false;
      for (const Word& u : spec.suffix_language(M)) {
        if (table.is_witness(u)) {
          meets = true;
          break;
        }
      }
      if (!meets) {
        Dyadic gap = (M == 1) ? Dyadic::one() : Dyadic::pow2_neg(static_cast<int>(M));
        return {ClosureVerdict::Kind::Disjoint, gap, std::nullopt, M};
      }
    }
  }

  // Look for an eventually periodic point of K inside closure(E_K).
  std::optional<Point> witness;
  Symbol h = spec.countable_alphabet() ? 4 : spec.finite_alphabet_size() - 1;
  std::size_t cap = spec.countable_alphabet() ? 2 : 3;
  for_small_points(spec.symbols_up_to(h), cap, [&](const Point& x) {
    if (spec.contains(x) && closure_member(spec, x)) {
      witness = x;
      return true;
    }
    return false;
  });
  if (witness)
    return {ClosureVerdict::Kind::Meets, Dyadic::zero(), witness, N};
  return {ClosureVerdict::Kind::Unknown, Dyadic::zero(), std::nullopt, N};
}

ClosedVerdict exit_set_closed(const WitnessTable& table) {
  ClosureVerdict cv = closure_meets_K(table);
  switch (cv.kind) {
    case ClosureVerdict::Kind::Disjoint:
      return {ClosedVerdict::Kind::Closed, std::nullopt, cv.depth};
    case ClosureVerdict::Kind::Meets:
      // The Meets witness lies in K, hence outside E_K, yet in the closure.
      return {ClosedVerdict::Kind::NotClosed, cv.witness, cv.depth};
    case ClosureVerdict::Kind::Unknown:
      return {ClosedVerdict::Kind::Unknown, std::nullopt, cv.depth};
  }
  return {ClosedVerdict::Kind::Unknown, std::nullopt, cv.depth};
}

std::vector<Point> enumerate_exit_points(const SubshiftSpec& spec, std::size_t count,
                                         Symbol horizon) {
  std::vector<Point> out;
  std::set<Point> seen;
  auto emit = [&](const Point& e) {
    if (out.size() >= count) return;
    if (!spec.contains(shift(e)) || spec.contains(e)) return;  // verified exits only
    if (seen.insert(e).second) out.push_back(e);
  };

  switch (spec.kind()) {
    case SubshiftSpec::Kind::EvenShift: {
      // ...0001 0^{2j+1} 1: closes an odd run over a tail in K.
      for (std::size_t j = 0; out.size() < count && j < count + 4; ++j) {
        std::vector<Symbol> t{1};
        t.insert(t.end(), 2 * j + 1, 0);
        t.push_back(1);
        emit(Point(Word{0}, Word{std::move(t)}));
      }
      break;
    }
    case SubshiftSpec::Kind::DisjointFamilies: {
      const auto& df = spec.df();
      for (Symbol k = 0; out.size() < count && k < count + 2; ++k)
        for (std::size_t i = 0; i < df.generators.size(); ++i) {
          Word f = df.expand(i, k);
          if (auto y = spec.point_ending(f.drop_last())) emit(append(*y, f.back()));
        }
      break;
    }
    case SubshiftSpec::Kind::FiniteForbidden:
    case SubshiftSpec::Kind::SymbolRule: {
      std::size_t base = std::max<std::size_t>(spec.max_forbidden_len(), 1) + 1;
      WitnessTable probe(spec, base + 6);
      for (std::size_t L = base; out.size() < count && L <= base + 4; ++L) {
        for (const Word& w : probe.witnesses(L, horizon)) {
          if (out.size() >= count) break;
          if (auto y = spec.point_ending(w.drop_last())) emit(append(*y, w.back()));
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace gshift
