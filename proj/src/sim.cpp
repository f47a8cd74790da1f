#include "gshift/sim.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace gshift {

void ExactRng::Draw::refine() {
  std::uint64_t block = (*gen_)();
  num_ <<= 64;
  num_ += block;
  bits_ += 64;
}

int ExactRng::Draw::compare(const Rational& r) {
  if (r <= 0) return +1;
  if (r >= 1) return -1;
  for (;;) {
    if (bits_ == 0) refine();
    // u lies in [num/2^bits, (num+1)/2^bits).
    Rational lo(num_, BigInt(1) << bits_);
    Rational hi(num_ + 1, BigInt(1) << bits_);
    if (r >= hi) return -1;
    if (r < lo) return +1;
    refine();  // r inside the current interval (or equal to lo)
  }
}

namespace {

// Trajectory state with cheap membership updates.  Distance and witness
// queries only look at a bounded recent window once the base point is
// known to lie in K; anything else falls back to the exact Point
// machinery.
class Walker : public LeftSeq {
 public:
  Walker(const SubshiftSpec& spec, Point x0) : spec_(&spec), origin_(std::move(x0)) {
    in_k_ = spec.contains(origin_);
    scan_even_state();
    if (spec.kind() == SubshiftSpec::Kind::DisjointFamilies) {
      for (Symbol a : origin_.period().symbols())
        max_block_ = std::max(max_block_, spec.df().block_of(a));
      for (Symbol a : origin_.transient().symbols())
        max_block_ = std::max(max_block_, spec.df().block_of(a));
    }
  }

  Symbol at(long j) const override {
    long idx = static_cast<long>(path_.size()) - 1 + j;
    if (idx >= 0) return path_[static_cast<std::size_t>(idx)];
    return origin_.at(j + static_cast<long>(path_.size()));
  }

  bool in_k() const { return in_k_; }
  bool tail_all_zero() const { return tail_all_zero_; }
  std::size_t trailing_zeros() const { return trailing_zeros_; }
  Symbol max_block() const { return max_block_; }
  const SubshiftSpec& spec() const { return *spec_; }

  // Would a forbidden pattern end at position 0 of (x, a)?
  bool extension_violates(Symbol a) const {
    switch (spec_->kind()) {
      case SubshiftSpec::Kind::FiniteForbidden: {
        for (const Word& f : spec_->ff().forbidden)
          if (extension_matches(f, a)) return true;
        return false;
      }
      case SubshiftSpec::Kind::SymbolRule: {
        const auto& allowed = spec_->sr().allowed;
        if (!std::binary_search(allowed.begin(), allowed.end(), a)) return true;
        for (const Word& f : spec_->sr().overlay)
          if (extension_matches(f, a)) return true;
        return false;
      }
      case SubshiftSpec::Kind::DisjointFamilies: {
        const auto& df = spec_->df();
        for (std::size_t i = 0; i < df.generators.size(); ++i) {
          if (df.generators[i].back() != df.offset_of(a)) continue;
          Word f = df.expand(i, df.block_of(a));
          if (extension_matches(f, a)) return true;
        }
        return false;
      }
      case SubshiftSpec::Kind::EvenShift:
        return a == 1 && !tail_all_zero_ && trailing_zeros_ % 2 == 1;
    }
    return false;
  }

  void advance(Symbol a) {
    if (in_k_) in_k_ = !extension_violates(a);
    path_.push_back(a);
    if (a == 0) {
      ++trailing_zeros_;
    } else {
      tail_all_zero_ = false;
      trailing_zeros_ = 0;
    }
    if (spec_->kind() == SubshiftSpec::Kind::DisjointFamilies)
      max_block_ = std::max(max_block_, spec_->df().block_of(a));
  }

  Point materialize() const {
    Word t = origin_.transient();
    for (Symbol a : path_) t.push_back(a);
    return Point(origin_.period(), t);
  }

 private:
  // f's last symbol would sit at position 0 (= a); match the rest against
  // the current point.
  bool extension_matches(const Word& f, Symbol a) const {
    if (f.back() != a) return false;
    for (std::size_t i = 1; i < f.size(); ++i)
      if (at(-static_cast<long>(i - 1)) != f[f.size() - 1 - i]) return false;
    return true;
  }

  void scan_even_state() {
    tail_all_zero_ = true;
    trailing_zeros_ = 0;
    std::size_t bound = origin_.transient().size() + origin_.period().size() + 1;
    for (std::size_t r = 0; r < bound; ++r) {
      if (origin_.at(-static_cast<long>(r)) != 0) {
        tail_all_zero_ = false;
        trailing_zeros_ = r;
        return;
      }
    }
  }

  const SubshiftSpec* spec_;
  Point origin_;
  std::vector<Symbol> path_;
  bool in_k_ = true;
  bool tail_all_zero_ = true;
  std::size_t trailing_zeros_ = 0;
  Symbol max_block_ = 0;
};

// rho((x,c), closure(E_K)) as an exponent: nullopt for 0, otherwise
// rho = 2^{-k}.  Requires the walker base to lie in K.
std::optional<long> fast_rho_exp(const Walker& w, Symbol c) {
  const SubshiftSpec& spec = w.spec();
  if (spec.kind() == SubshiftSpec::Kind::EvenShift) {
    if (c != 1) return 0;  // rho = 1: witnesses end in 1
    if (w.tail_all_zero()) return std::nullopt;
    std::size_t r = w.trailing_zeros();
    if (r % 2 == 1) return std::nullopt;
    return static_cast<long>(r + 1);
  }
  if (w.extension_violates(c)) return std::nullopt;  // (x,c) is an exit point
  std::size_t bound = spec.max_forbidden_len() + 2;
  if (spec.kind() == SubshiftSpec::Kind::DisjointFamilies) {
    const auto& df = spec.df();
    for (std::size_t i = 0; i < df.generators.size(); ++i)
      if (df.generators[i].back() == df.offset_of(c))
        bound = df.generators[i].size() * (std::size_t(df.block_of(c)) + 1) + 2;
  }
  for (std::size_t m = 1; m <= bound; ++m) {
    std::vector<Symbol> syms(m);
    syms[m - 1] = c;
    for (std::size_t i = 0; i + 1 < m; ++i)
      syms[i] = w.at(-static_cast<long>(m - 2 - i));
    if (!is_exit_witness(spec, Word{std::move(syms)})) return static_cast<long>(m) - 1;
  }
  throw std::logic_error("fast_rho_exp: witness scan did not terminate");
}

Rational rho_from_exp(const std::optional<long>& k) {
  if (!k) return Rational(0);
  return *k == 0 ? Rational(1) : pow2(-*k);
}

// g((x,a)) for the walker base x; exact rational.
Rational fast_g(const GFunction& g, const Walker& w, Symbol a) {
  const SubshiftSpec& spec = g.spec();
  switch (g.variant()) {
    case GFunction::Variant::BaselineWeights:
      return g.weights().lambda(a);

    case GFunction::Variant::KriegerReciprocal: {
      std::uint32_t n = spec.finite_alphabet_size();
      Rational denom = 0, num = 0;
      for (Symbol c = 0; c < n; ++c) {
        auto k = fast_rho_exp(w, c);
        if (!k) continue;  // n(.) infinite
        Rational term(1, std::max<long>(1, *k));
        denom += term;
        if (c == a) num = term;
      }
      if (denom == 0)
        throw InvalidUsage("no extension leaves closure(E_K): property G fails here");
      return num / denom;
    }

    case GFunction::Variant::WeightedDistance: {
      const GCertificate& cert = *g.certificate();
      Word cls;
      if (cert.m >= 2) {
        std::vector<Symbol> syms(cert.m - 1);
        for (std::size_t i = 0; i < cert.m - 1; ++i)
          syms[i] = w.at(-static_cast<long>(cert.m - 2 - i));
        cls = Word{std::move(syms)};
      }
      auto it = cert.escape.find(cls);
      if (it == cert.escape.end()) return g.weights().lambda(a);
      Symbol b = it->second;
      if (a != b) return g.weights().lambda(a) * rho_from_exp(fast_rho_exp(w, a));

      Rational s = 0;
      if (!spec.countable_alphabet()) {
        for (Symbol c = 0; c < spec.finite_alphabet_size(); ++c)
          if (c != b) s += g.weights().lambda(c) * rho_from_exp(fast_rho_exp(w, c));
        return 1 - s;
      }
      if (spec.kind() == SubshiftSpec::Kind::SymbolRule) {
        Symbol T = std::max<Symbol>(spec.sr().allowed.back(), b);
        for (Symbol c = 0; c <= T; ++c)
          if (c != b) s += g.weights().lambda(c) * rho_from_exp(fast_rho_exp(w, c));
        s += g.weights().tail_mass(T) * rho_from_exp(fast_rho_exp(w, T + 1));
        return 1 - s;
      }
      const DisjointFamilies& df = spec.df();
      Symbol T = std::max<Symbol>((w.max_block() + 2) * df.stride - 1, b);
      for (Symbol c = 0; c <= T; ++c)
        if (c != b) s += g.weights().lambda(c) * rho_from_exp(fast_rho_exp(w, c));
      for (Symbol o = 0; o < df.stride; ++o) {
        Symbol first = T + 1 + (o + df.stride - (T + 1) % df.stride) % df.stride;
        bool ends = false;
        for (const Word& gen : df.generators) ends = ends || gen.back() == o;
        s += g.weights().strided_mass(first, df.stride) * (ends ? Rational(1, 2) : Rational(1));
      }
      return 1 - s;
    }
  }
  throw std::logic_error("unreachable");
}

Symbol sample_symbol(const GFunction& g, const Walker& w, ExactRng& rng) {
  auto draw = rng.draw();
  bool fast = w.in_k() || g.variant() == GFunction::Variant::BaselineWeights;
  bool finite = !g.spec().countable_alphabet();
  Symbol cap = finite ? g.spec().finite_alphabet_size() - 1 : (Symbol(1) << 20);
  Rational cum = 0;
  std::optional<Point> slow_base;
  if (!fast) slow_base = w.materialize();
  for (Symbol a = 0; a <= cap; ++a) {
    Rational p = fast ? fast_g(g, w, a)
                      : g.eval(append(*slow_base, a), Rational(1, 1 << 20)).lo;
    if (p == 0) continue;
    cum += p;
    if (draw.compare(cum) < 0) return a;
  }
  throw std::logic_error("sampling did not terminate within the symbol cap");
}

}  // namespace

std::pair<Symbol, Point> step(const GFunction& g, const Point& x, ExactRng& rng,
                              const Rational& eps) {
  (void)eps;  // enclosures are exact for the supported families
  Walker w(g.spec(), x);
  Symbol a = sample_symbol(g, w, rng);
  return {a, append(x, a)};
}

Trajectory run(const GFunction& g, const Point& x0, std::size_t steps, std::uint64_t seed) {
  if (!g.spec().contains(x0)) throw InvalidUsage("initial point must lie in K");
  Trajectory traj;
  traj.initial = x0;
  traj.seed = seed;
  traj.symbols.reserve(steps);
  traj.in_k.reserve(steps);
  ExactRng rng(seed);
  Walker w(g.spec(), x0);
  for (std::size_t t = 1; t <= steps; ++t) {
    bool was_in = w.in_k();
    Symbol a = sample_symbol(g, w, rng);
    w.advance(a);
    traj.symbols.push_back(a);
    traj.in_k.push_back(w.in_k() ? 1 : 0);
    if (was_in && !w.in_k() && !traj.first_exit) traj.first_exit = t;
  }
  return traj;
}

std::string Trajectory::dump() const {
  std::ostringstream out;
  for (std::size_t t = 0; t < symbols.size(); ++t)
    out << (t + 1) << ' ' << symbols[t] << ' ' << int(in_k[t]) << '\n';
  return out.str();
}

SimReport empirical_invariance(const GFunction& g, const Point& x0, std::size_t steps,
                               std::size_t runs, std::uint64_t seed) {
  SimReport rep;
  rep.runs = runs;
  rep.steps = steps;
  for (std::size_t r = 0; r < runs; ++r) {
    Trajectory t = run(g, x0, steps, seed + r);
    rep.first_exits.push_back(t.first_exit);
    if (t.first_exit) ++rep.exit_count;
  }
  rep.invariant = rep.exit_count == 0;
  return rep;
}

std::string SimReport::summary() const {
  std::ostringstream out;
  out << "runs\t" << runs << "\nsteps\t" << steps << "\nexits\t" << exit_count << "\n";
  std::map<std::size_t, std::size_t> hist;
  for (const auto& fe : first_exits)
    if (fe) ++hist[*fe];
  for (const auto& [t, c] : hist) out << "first_exit\t" << t << '\t' << c << '\n';
  out << "invariant\t" << (invariant ? "yes" : "no") << '\n';
  return out.str();
}

}  // namespace gshift
