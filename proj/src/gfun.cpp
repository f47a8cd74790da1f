#include "gshift/gfun.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

namespace gshift {

WeightSeq WeightSeq::uniform(std::uint32_t n) {
  if (n == 0) throw InvalidUsage("uniform weights need a nonempty alphabet");
  WeightSeq w;
  w.geometric_ = false;
  w.n_ = n;
  return w;
}

WeightSeq WeightSeq::geometric(Rational q) {
  if (!(q > 0 && q < 1)) throw InvalidUsage("geometric ratio must lie in (0,1)");
  WeightSeq w;
  w.geometric_ = true;
  w.q_ = std::move(q);
  return w;
}

Rational WeightSeq::lambda(Symbol a) const {
  if (!geometric_) {
    if (a >= n_) throw InvalidUsage("symbol outside the finite alphabet");
    return Rational(1, n_);
  }
  return (1 - q_) * pow_rational(q_, a);
}

Rational WeightSeq::tail_mass(Symbol H) const {
  if (!geometric_) return H + 1 >= n_ ? Rational(0) : Rational(n_ - (H + 1), n_);
  return pow_rational(q_, std::uint64_t(H) + 1);
}

Rational WeightSeq::strided_mass(Symbol first, Symbol stride) const {
  if (!geometric_) throw InvalidUsage("strided tails are geometric-only");
  // (1-q) q^first (1 + q^s + q^{2s} + ...) = (1-q) q^first / (1 - q^s)
  return (1 - q_) * pow_rational(q_, first) / (1 - pow_rational(q_, stride));
}

std::string WeightSeq::str() const {
  if (!geometric_) return "uniform(" + std::to_string(n_) + ")";
  std::ostringstream out;
  out << "geometric(" << q_ << ")";
  return out.str();
}

WeightSeq weights_for(const SubshiftSpec& spec) {
  const WeightsDecl& d = spec.weights();
  switch (d.kind) {
    case WeightsDecl::Kind::Uniform:
      return WeightSeq::uniform(spec.finite_alphabet_size());
    case WeightsDecl::Kind::Geometric:
      return WeightSeq::geometric(d.q);
    case WeightsDecl::Kind::Default:
      return spec.countable_alphabet() ? WeightSeq::geometric(Rational(1, 2))
                                       : WeightSeq::uniform(spec.finite_alphabet_size());
  }
  throw std::logic_error("unreachable");
}

std::string GCertificate::str() const {
  std::ostringstream out;
  out << "m=" << m << " classes:";
  if (escape.empty()) out << " (none)";
  for (const auto& [cls, b] : escape)
    out << ' ' << (cls.empty() ? std::string("-") : cls.str()) << "->" << b;
  return out.str();
}

namespace {

Dyadic rho_to_closure(const SubshiftSpec& spec, const Point& z) {
  auto k = max_witness_depth(spec, z);
  if (!k) return Dyadic::zero();
  return *k == 0 ? Dyadic::one() : Dyadic::pow2_neg(static_cast<int>(*k));
}

// Deterministic sweep shared with the refutation search.
template <typename Fn>
bool sweep_small_points(const std::vector<Symbol>& symbols, std::size_t max_len, Fn&& fn) {
  std::vector<std::vector<Word>> words_by_len(max_len + 1);
  words_by_len[0].push_back(Word{});
  for (std::size_t len = 1; len <= max_len; ++len)
    for (const Word& w : words_by_len[len - 1])
      for (Symbol a : symbols) {
        std::vector<Symbol> syms = w.symbols();
        syms.push_back(a);
        words_by_len[len].push_back(Word{std::move(syms)});
      }
  std::set<Point> seen;
  for (std::size_t plen = 1; plen <= max_len; ++plen)
    for (const Word& p : words_by_len[plen])
      for (std::size_t tlen = 0; tlen <= max_len; ++tlen)
        for (const Word& t : words_by_len[tlen]) {
          Point x(p, t);
          if (!seen.insert(x).second) continue;
          if (fn(x)) return true;
        }
  return false;
}

}  // namespace

CertifyResult certify_property_g(const WitnessTable& table, std::size_t m_max, Symbol horizon) {
  const SubshiftSpec& spec = table.spec();
  if (table.probe_depth() < m_max + 1)
    throw InvalidUsage("probe depth must exceed the certificate search depth");

  bool countable = spec.countable_alphabet();
  std::vector<Symbol> symbols = spec.symbols_up_to(horizon);

  for (std::size_t m = 1; m <= m_max; ++m) {
    if (m == 1) {
      bool e1_empty = true;
      for (Symbol a : symbols)
        if (is_exit_witness(spec, Word{a})) {
          e1_empty = false;
          break;
        }
      if (e1_empty) {
        // No exits visible at depth 1: the empty certificate.
        CertifyResult r;
        r.kind = CertifyResult::Kind::Certified;
        r.cert = GCertificate{1, {}};
        return r;
      }
      // With exits present, depth 1 collapses every class into one; only
      // the countable constructions use that degenerate form.
      if (!countable) continue;
      std::optional<Symbol> escape;
      for (Symbol b : symbols)
        if (!is_exit_witness(spec, Word{b})) {
          escape = b;
          break;
        }
      if (escape) {
        CertifyResult r;
        r.kind = CertifyResult::Kind::Certified;
        r.cert = GCertificate{1, {{Word{}, *escape}}};
        return r;
      }
      continue;
    }

    // Classes with unbounded symbol support cannot be enumerated.
    if (spec.kind() == SubshiftSpec::Kind::DisjointFamilies) break;

    bool all_escape = true;
    std::map<Word, Symbol> escape;
    for (const Word& v : spec.suffix_language(m - 1, horizon)) {
      bool is_class = false;
      if (spec.kind() == SubshiftSpec::Kind::SymbolRule) {
        is_class = true;  // any disallowed symbol exits from any suffix
      } else {
        for (Symbol a : symbols) {
          std::vector<Symbol> syms = v.symbols();
          syms.push_back(a);
          if (is_exit_witness(spec, Word{std::move(syms)})) {
            is_class = true;
            break;
          }
        }
      }
      if (!is_class) continue;
      std::optional<Symbol> b;
      for (Symbol cand : symbols) {
        std::vector<Symbol> syms = v.symbols();
        syms.push_back(cand);
        if (!is_exit_witness(spec, Word{std::move(syms)})) {
          b = cand;
          break;
        }
      }
      if (!b) {
        all_escape = false;
        break;
      }
      escape[v] = *b;
    }
    if (all_escape) {
      CertifyResult r;
      r.kind = CertifyResult::Kind::Certified;
      r.cert = GCertificate{m, std::move(escape)};
      return r;
    }
  }

  // Refutation: a point all of whose extensions land in closure(E_K).
  // Only meaningful when the symbol set is structurally complete.
  std::vector<Symbol> testset;
  if (!countable) {
    testset = symbols;
  } else if (spec.kind() == SubshiftSpec::Kind::SymbolRule &&
             spec.sr().allowed.back() <= horizon) {
    // Disallowed symbols behave identically; one representative covers
    // them all.
    testset = spec.sr().allowed;
    testset.push_back(spec.sr().allowed.back() + 1);
  }
  if (!testset.empty()) {
    CertifyResult r;
    std::vector<Symbol> sweep_syms =
        countable ? std::vector<Symbol>(spec.sr().allowed) : symbols;
    bool found = sweep_small_points(sweep_syms, 3, [&](const Point& x) {
      for (Symbol a : testset)
        if (!closure_member(spec, append(x, a))) return false;
      r.refutation = x;
      return true;
    });
    if (found) {
      r.kind = CertifyResult::Kind::Refuted;
      return r;
    }
  }
  return CertifyResult{CertifyResult::Kind::Unknown, std::nullopt, std::nullopt};
}

GFunction GFunction::krieger(WitnessTable table) {
  if (table.spec().countable_alphabet())
    throw InvalidUsage("the reciprocal construction requires a finite alphabet");
  WeightSeq w = WeightSeq::uniform(table.spec().finite_alphabet_size());
  return GFunction(Variant::KriegerReciprocal, std::move(table), {}, std::move(w));
}

GFunction GFunction::weighted(WitnessTable table, GCertificate cert, WeightSeq weights) {
  return GFunction(Variant::WeightedDistance, std::move(table), std::move(cert),
                   std::move(weights));
}

GFunction GFunction::baseline(WitnessTable table, WeightSeq weights) {
  return GFunction(Variant::BaselineWeights, std::move(table), {}, std::move(weights));
}

std::string GFunction::variant_name() const {
  switch (variant_) {
    case Variant::KriegerReciprocal:
      return "krieger";
    case Variant::WeightedDistance:
      return "weighted";
    case Variant::BaselineWeights:
      return "baseline";
  }
  return "?";
}

namespace {

// n(.) exponent for one sibling (x, c): infinite on closure members.
NValue sibling_n(const SubshiftSpec& spec, const Point& x, Symbol c) {
  auto k = max_witness_depth(spec, append(x, c));
  if (!k) return NValue::infinite();
  return NValue::of(std::max<std::size_t>(1, *k));
}

// Symbols above this bound sit in blocks untouched by x, so their
// sibling distances depend only on the residue class mod stride.
Symbol df_fresh_threshold(const DisjointFamilies& df, const Point& x) {
  Symbol maxblock = 0;
  for (Symbol a : x.period().symbols()) maxblock = std::max(maxblock, df.block_of(a));
  for (Symbol a : x.transient().symbols()) maxblock = std::max(maxblock, df.block_of(a));
  return (maxblock + 2) * df.stride - 1;
}

bool df_offset_ends_generator(const DisjointFamilies& df, Symbol offset) {
  for (const Word& g : df.generators)
    if (g.back() == offset) return true;
  return false;
}

}  // namespace

RatInterval GFunction::eval(const Point& z, const Rational& eps) const {
  if (eps <= 0) throw InvalidUsage("eps must be positive");
  Symbol z0 = z.at(0);
  switch (variant_) {
    case Variant::BaselineWeights:
      return RatInterval::exact(weights_.lambda(z0));

    case Variant::KriegerReciprocal: {
      Point x = shift(z);
      std::uint32_t n = spec().finite_alphabet_size();
      Rational denom = 0;
      Rational num = 0;
      for (Symbol c = 0; c < n; ++c) {
        NValue nv = sibling_n(spec(), x, c);
        if (!nv.finite) continue;
        Rational term(1, static_cast<unsigned long>(nv.n));
        denom += term;
        if (c == z0) num = term;
      }
      if (denom == 0)
        throw InvalidUsage("no extension leaves closure(E_K): property G fails here");
      return RatInterval::exact(num / denom);
    }

    case Variant::WeightedDistance: {
      Point x = shift(z);
      Word cls = cert_.m >= 2 ? point_suffix(x, cert_.m - 1) : Word{};
      auto it = cert_.escape.find(cls);
      if (it == cert_.escape.end()) return RatInterval::exact(weights_.lambda(z0));
      Symbol b = it->second;
      if (z0 != b)
        return RatInterval::exact(weights_.lambda(z0) *
                                  rho_to_closure(spec(), z).to_rational());

      // g = 1 - sum_{c != b} lambda_c rho((x,c), closure(E_K))
      Rational s = 0;
      if (!spec().countable_alphabet()) {
        for (Symbol c = 0; c < spec().finite_alphabet_size(); ++c) {
          if (c == b) continue;
          Dyadic rho = rho_to_closure(spec(), append(x, c));
          if (!rho.is_zero()) s += weights_.lambda(c) * rho.to_rational();
        }
        return RatInterval::exact(1 - s);
      }

      // Countable: explicit terms up to a structural threshold, then the
      // residue classes of fresh symbols collapse to closed forms.
      if (spec().kind() == SubshiftSpec::Kind::SymbolRule) {
        Symbol T = std::max<Symbol>(spec().sr().allowed.back(), b);
        for (Symbol c = 0; c <= T; ++c) {
          if (c == b) continue;
          Dyadic rho = rho_to_closure(spec(), append(x, c));
          if (!rho.is_zero()) s += weights_.lambda(c) * rho.to_rational();
        }
        // Symbols above T are all disallowed and share one distance.
        Dyadic rho_rep = rho_to_closure(spec(), append(x, T + 1));
        s += weights_.tail_mass(T) * rho_rep.to_rational();
        return RatInterval::exact(1 - s);
      }
      const DisjointFamilies& df = spec().df();
      Symbol T = std::max<Symbol>(df_fresh_threshold(df, x), b);
      for (Symbol c = 0; c <= T; ++c) {
        if (c == b) continue;
        Dyadic rho = rho_to_closure(spec(), append(x, c));
        if (!rho.is_zero()) s += weights_.lambda(c) * rho.to_rational();
      }
      for (Symbol o = 0; o < df.stride; ++o) {
        // Fresh symbols with this residue: distance 1/2 when the offset
        // can end an expanded word, 1 otherwise.
        Symbol first = T + 1 + (o + df.stride - (T + 1) % df.stride) % df.stride;
        Rational rho = df_offset_ends_generator(df, o) ? Rational(1, 2) : Rational(1);
        s += weights_.strided_mass(first, df.stride) * rho;
      }
      return RatInterval::exact(1 - s);
    }
  }
  throw std::logic_error("unreachable");
}

RatInterval GFunction::sum_over_preimages(const Point& x, const Rational& eps) const {
  if (!spec().countable_alphabet()) {
    RatInterval total = RatInterval::exact(0);
    for (Symbol a = 0; a < spec().finite_alphabet_size(); ++a)
      total += eval(append(x, a), eps);
    return total;
  }

  // Explicit evaluations below a structural threshold; beyond it every
  // summand is a baseline or lambda*rho term whose residue class has an
  // exact geometric mass.
  Symbol T;
  if (spec().kind() == SubshiftSpec::Kind::SymbolRule)
    T = spec().sr().allowed.back() + 1;
  else
    T = df_fresh_threshold(spec().df(), x);
  std::optional<Symbol> b;
  if (variant_ == Variant::WeightedDistance) {
    Word cls = cert_.m >= 2 ? point_suffix(x, cert_.m - 1) : Word{};
    auto it = cert_.escape.find(cls);
    if (it != cert_.escape.end()) {
      b = it->second;
      T = std::max(T, *b);
    }
  }

  RatInterval total = RatInterval::exact(0);
  for (Symbol a = 0; a <= T; ++a) total += eval(append(x, a), eps);

  Rational tail = 0;
  if (variant_ == Variant::BaselineWeights || !b) {
    tail = weights_.tail_mass(T);  // all baseline beyond T
  } else if (spec().kind() == SubshiftSpec::Kind::SymbolRule) {
    Dyadic rho_rep = rho_to_closure(spec(), append(x, T + 1));
    tail = weights_.tail_mass(T) * rho_rep.to_rational();
  } else {
    const DisjointFamilies& df = spec().df();
    for (Symbol o = 0; o < df.stride; ++o) {
      Symbol first = T + 1 + (o + df.stride - (T + 1) % df.stride) % df.stride;
      Rational rho = df_offset_ends_generator(df, o) ? Rational(1, 2) : Rational(1);
      tail += weights_.strided_mass(first, df.stride) * rho;
    }
  }
  total += RatInterval::exact(tail);
  return total;
}

RatInterval GFunction::eval_truncated(const Point& z, Symbol H) const {
  if (variant_ != Variant::WeightedDistance)
    throw InvalidUsage("truncated evaluation applies to the weighted construction");
  Symbol z0 = z.at(0);
  Point x = shift(z);
  Word cls = cert_.m >= 2 ? point_suffix(x, cert_.m - 1) : Word{};
  auto it = cert_.escape.find(cls);
  if (it == cert_.escape.end() || z0 != it->second) return eval(z, Rational(1));
  Symbol b = it->second;
  Rational s = 0;
  for (Symbol c = 0; c <= H; ++c) {
    if (c == b) continue;
    Dyadic rho = rho_to_closure(spec(), append(x, c));
    if (!rho.is_zero()) s += weights_.lambda(c) * rho.to_rational();
  }
  // rho <= 1, so the dropped tail is at most the tail mass.
  return RatInterval{1 - s - weights_.tail_mass(H), 1 - s};
}

void Report::add(CheckLine line) {
  pass = pass && line.pass;
  lines.push_back(std::move(line));
}

std::string Report::tsv() const {
  std::ostringstream out;
  for (const CheckLine& l : lines)
    out << "check\t" << l.name << '\t' << l.point << '\t' << l.lo << '\t' << l.hi << '\t'
        << (l.pass ? "pass" : "FAIL") << '\n';
  return out.str();
}

std::vector<Point> sample_points(const SubshiftSpec& spec, std::size_t count,
                                 std::uint64_t seed, Symbol horizon) {
  std::mt19937_64 rng(seed);
  Symbol cap =
      spec.countable_alphabet() ? std::min<Symbol>(horizon, 6) : spec.finite_alphabet_size() - 1;
  std::vector<Point> out;
  out.reserve(count);
  while (out.size() < count) {
    std::size_t plen = 1 + rng() % 3;
    std::size_t tlen = rng() % 4;
    std::vector<Symbol> p(plen), t(tlen);
    for (auto& s : p) s = static_cast<Symbol>(rng() % (cap + 1));
    for (auto& s : t) s = static_cast<Symbol>(rng() % (cap + 1));
    out.emplace_back(Word{std::move(p)}, Word{std::move(t)});
  }
  return out;
}

std::vector<Point> sample_k_points(const SubshiftSpec& spec, std::size_t count,
                                   std::uint64_t seed, Symbol horizon) {
  std::vector<Point> out;
  std::set<Point> seen;
  for (const Point& x : sample_points(spec, count * 50, seed, horizon)) {
    if (out.size() >= count) break;
    if (spec.contains(x) && seen.insert(x).second) out.push_back(x);
  }
  if (out.size() < count) {
    for (const Word& u : spec.suffix_language(std::min<std::size_t>(3, 3), horizon)) {
      if (out.size() >= count) break;
      if (auto y = spec.point_ending(u))
        if (seen.insert(*y).second) out.push_back(*y);
    }
  }
  return out;
}

Report verify_sum_one(const GFunction& g, const std::vector<Point>& bases, const Rational& eps,
                      Symbol horizon) {
  (void)horizon;  // tails are handled structurally
  Report rep;
  for (const Point& x : bases) {
    RatInterval s = g.sum_over_preimages(x, eps);
    bool pass = s.contains(1) && s.width() <= eps;
    rep.add({"sum_one", x.str(), s.lo, s.hi, pass});
  }
  return rep;
}

Report verify_invariance(const GFunction& g, std::size_t samples, Symbol horizon) {
  Report rep;
  std::vector<Point> exits = enumerate_exit_points(g.spec(), samples, horizon);
  if (exits.empty()) {
    rep.add({"invariance", "(no exit points)", 0, 0, true});
    return rep;
  }
  for (const Point& e : exits) {
    RatInterval v = g.eval(e, Rational(1, 1 << 20));
    bool pass = v.lo == 0 && v.hi == 0;
    rep.add({"invariance", e.str(), v.lo, v.hi, pass});
  }
  return rep;
}

Report verify_strict(const GFunction& g, std::size_t samples, Symbol horizon) {
  if (g.variant() != GFunction::Variant::WeightedDistance)
    throw InvalidUsage("strictness applies to the weighted construction");
  Report rep;
  const SubshiftSpec& spec = g.spec();
  const Rational eps(1, 1 << 20);

  // Zero side: exit points and any certified closure point in K.
  std::vector<Point> zeros = enumerate_exit_points(spec, samples, horizon);
  ClosureVerdict cv = closure_meets_K(g.table());
  if (cv.kind == ClosureVerdict::Kind::Meets) zeros.push_back(*cv.witness);
  for (const Point& e : zeros) {
    RatInterval v = g.eval(e, eps);
    bool pass = v.lo == 0 && v.hi == 0 && closure_member(spec, e);
    rep.add({"strict_zero", e.str(), v.lo, v.hi, pass});
  }

  // Positive side: sampled K-points away from the closure get the
  // branch-wise lower bound.
  const GCertificate& cert = *g.certificate();
  for (const Point& x : sample_k_points(spec, samples, 20240u, horizon)) {
    if (closure_member(spec, x)) continue;
    Dyadic d = distance_to_exit(g.table(), x);
    RatInterval v = g.eval(x, eps);
    Word cls = cert.m >= 2 ? point_suffix(shift(x), cert.m - 1) : Word{};
    auto it = cert.escape.find(cls);
    Rational expect_lo;
    if (it == cert.escape.end())
      expect_lo = g.weights().lambda(x.at(0));
    else if (x.at(0) != it->second)
      expect_lo = g.weights().lambda(x.at(0)) * d.to_rational();
    else
      expect_lo = g.weights().lambda(it->second);
    bool pass = v.lo > 0 && v.lo >= expect_lo;
    rep.add({"strict_pos", x.str(), v.lo, v.hi, pass});
  }
  return rep;
}

std::string PositiveReport::verdict_name() const {
  switch (verdict) {
    case PositiveVerdict::Holds:
      return "holds";
    case PositiveVerdict::FailsAt:
      return "fails";
    case PositiveVerdict::NotApplicable:
      return "not-applicable";
    case PositiveVerdict::Undetermined:
      return "undetermined";
  }
  return "?";
}

PositiveReport verify_strictly_positive(const GFunction& g, std::size_t samples,
                                        Symbol horizon) {
  PositiveReport out;
  const SubshiftSpec& spec = g.spec();
  const Rational eps(1, 1 << 20);
  ClosureVerdict cv = closure_meets_K(g.table());
  if (cv.kind == ClosureVerdict::Kind::Meets) {
    out.verdict = PositiveVerdict::NotApplicable;
    out.witness = cv.witness;
    RatInterval v = g.eval(*cv.witness, eps);
    out.details.add({"positive_na", cv.witness->str(), v.lo, v.hi, v.hi == 0});
    return out;
  }
  bool all_positive = true;
  for (const Point& x : sample_k_points(spec, samples, 515u, horizon)) {
    RatInterval v = g.eval(x, eps);
    bool pos = v.lo > 0;
    out.details.add({"positive", x.str(), v.lo, v.hi, pos});
    if (!pos) {
      all_positive = false;
      if (!out.witness) out.witness = x;
    }
  }
  if (!all_positive) {
    out.verdict = PositiveVerdict::FailsAt;
    return out;
  }
  out.verdict = cv.kind == ClosureVerdict::Kind::Disjoint ? PositiveVerdict::Holds
                                                          : PositiveVerdict::Undetermined;
  return out;
}

}  // namespace gshift
