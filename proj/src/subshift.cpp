#include "gshift/subshift.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace gshift {

namespace {

constexpr std::size_t kMaxEnumeration = std::size_t(1) << 20;
constexpr std::size_t kMaxExpandedLen = 200000;

bool contains_any_factor(const Word& w, const std::vector<Word>& forbidden) {
  for (const Word& f : forbidden)
    if (w.contains_factor(f)) return true;
  return false;
}

}  // namespace

std::vector<Word> reduce_forbidden(std::vector<Word> forbidden) {
  std::sort(forbidden.begin(), forbidden.end(), WordShortlex{});
  forbidden.erase(std::unique(forbidden.begin(), forbidden.end()), forbidden.end());
  std::vector<Word> reduced;
  for (const Word& f : forbidden) {
    bool redundant = false;
    for (const Word& g : reduced)
      if (f.contains_factor(g)) {
        redundant = true;
        break;
      }
    if (!redundant) reduced.push_back(f);
  }
  return reduced;
}

Word DisjointFamilies::expand(std::size_t gen, Symbol block) const {
  const Word& g = generators[gen];
  std::size_t len = g.size() * (std::size_t(block) + 1);
  if (len > kMaxExpandedLen)
    throw InvalidUsage("expanded forbidden word too long (block index " +
                       std::to_string(block) + ")");
  std::vector<Symbol> syms;
  syms.reserve(len);
  for (Symbol rep = 0; rep <= block; ++rep)
    for (Symbol s : g.symbols()) syms.push_back(s + block * stride);
  return Word(std::move(syms));
}

namespace detail {

// De Bruijn-style presentation on admissible (M-1)-blocks.  `left_viable`
// marks blocks with arbitrarily long admissible incoming paths (these are
// exactly the blocks where suffixes of K-points can start); `essential`
// additionally requires outgoing paths, matching the usual bi-extendable
// SFT presentation.
struct BlockGraph {
  std::size_t memory = 1;
  std::size_t block_len = 0;
  std::vector<Symbol> alphabet;  // sorted raw symbols
  std::vector<Word> blocks;      // sorted
  std::map<Word, std::size_t> index;
  std::vector<std::vector<TransitionGraph::Edge>> out;  // by from-vertex
  std::vector<char> left_viable;
  std::vector<char> essential;
  std::vector<Word> forbidden;  // owned copy

  static BlockGraph build(std::vector<Symbol> alphabet, std::vector<Word> forbidden_in) {
    BlockGraph g;
    g.alphabet = std::move(alphabet);
    g.forbidden = std::move(forbidden_in);
    const std::vector<Word>& forbidden = g.forbidden;
    for (const Word& f : forbidden) g.memory = std::max(g.memory, f.size());
    g.block_len = g.memory - 1;

    double count = std::pow(double(g.alphabet.size()), double(g.block_len));
    if (count > double(kMaxEnumeration))
      throw InvalidUsage("alphabet too large for the forbidden-word memory");

    std::vector<Symbol> cur;
    std::function<void()> rec = [&]() {
      if (cur.size() == g.block_len) {
        Word w{std::vector<Symbol>(cur)};
        if (!contains_any_factor(w, forbidden)) g.blocks.push_back(w);
        return;
      }
      for (Symbol a : g.alphabet) {
        cur.push_back(a);
        rec();
        cur.pop_back();
      }
    };
    rec();
    std::sort(g.blocks.begin(), g.blocks.end());
    for (std::size_t i = 0; i < g.blocks.size(); ++i) g.index[g.blocks[i]] = i;

    g.out.resize(g.blocks.size());
    for (std::size_t i = 0; i < g.blocks.size(); ++i) {
      for (Symbol a : g.alphabet) {
        std::vector<Symbol> m = g.blocks[i].symbols();
        m.push_back(a);
        Word mword{std::move(m)};
        if (contains_any_factor(mword, forbidden)) continue;
        std::vector<Symbol> next(mword.symbols().begin() + 1, mword.symbols().end());
        auto it = g.index.find(Word{std::move(next)});
        if (it == g.index.end()) continue;
        g.out[i].push_back({i, it->second, a});
      }
    }

    g.left_viable = g.prune(/*need_in=*/true, /*need_out=*/false);
    g.essential = g.prune(/*need_in=*/true, /*need_out=*/true);
    return g;
  }

  std::vector<char> prune(bool need_in, bool need_out) const {
    std::vector<char> alive(blocks.size(), 1);
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<std::size_t> indeg(blocks.size(), 0), outdeg(blocks.size(), 0);
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (!alive[i]) continue;
        for (const auto& e : out[i])
          if (alive[e.to]) {
            ++outdeg[i];
            ++indeg[e.to];
          }
      }
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (!alive[i]) continue;
        if ((need_in && indeg[i] == 0) || (need_out && outdeg[i] == 0)) {
          alive[i] = 0;
          changed = true;
        }
      }
    }
    return alive;
  }

  bool any_left_viable() const {
    return std::any_of(left_viable.begin(), left_viable.end(), [](char c) { return c != 0; });
  }

  // Is w (known factor-admissible) the suffix of some K-point?
  bool suffix_viable(const Word& w) const {
    if (block_len == 0) return any_left_viable();
    if (w.size() >= block_len) {
      std::vector<Symbol> head(w.symbols().begin(), w.symbols().begin() + block_len);
      auto it = index.find(Word{std::move(head)});
      return it != index.end() && left_viable[it->second];
    }
    // Short word: search for an admissible left pad reaching a viable block.
    std::size_t pad = block_len - w.size();
    std::vector<Symbol> cur;
    std::function<bool()> rec = [&]() -> bool {
      if (cur.size() == pad) {
        std::vector<Symbol> full = cur;
        full.insert(full.end(), w.symbols().begin(), w.symbols().end());
        Word fw{std::move(full)};
        if (contains_any_factor(fw, forbidden)) return false;
        auto it = index.find(fw);
        return it != index.end() && left_viable[it->second];
      }
      for (Symbol a : alphabet) {
        cur.push_back(a);
        if (rec()) return true;
        cur.pop_back();
      }
      return false;
    };
    return rec();
  }

  void enumerate_suffixes(std::size_t n, std::vector<Word>& outwords) const {
    if (n < block_len) {
      std::vector<Symbol> cur;
      std::function<void()> rec = [&]() {
        if (cur.size() == n) {
          Word w{std::vector<Symbol>(cur)};
          if (!contains_any_factor(w, forbidden) && suffix_viable(w)) outwords.push_back(w);
          return;
        }
        for (Symbol a : alphabet) {
          cur.push_back(a);
          rec();
          cur.pop_back();
        }
      };
      rec();
      return;
    }
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (!left_viable[i]) continue;
      std::vector<Symbol> cur = blocks[i].symbols();
      std::function<void(std::size_t)> rec = [&](std::size_t v) {
        if (cur.size() == n) {
          outwords.push_back(Word{std::vector<Symbol>(cur)});
          return;
        }
        for (const auto& e : out[v]) {
          cur.push_back(e.sym);
          rec(e.to);
          cur.pop_back();
        }
      };
      rec(i);
    }
  }

  BigInt count_suffixes(std::size_t n) const {
    if (n < block_len) {
      std::vector<Word> words;
      enumerate_suffixes(n, words);
      return BigInt(words.size());
    }
    std::vector<BigInt> ways(blocks.size());
    for (std::size_t i = 0; i < blocks.size(); ++i) ways[i] = left_viable[i] ? 1 : 0;
    for (std::size_t step = block_len; step < n; ++step) {
      std::vector<BigInt> next(blocks.size());
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (ways[i] == 0) continue;
        for (const auto& e : out[i]) next[e.to] += ways[i];
      }
      ways = std::move(next);
    }
    BigInt total = 0;
    for (const auto& v : ways) total += v;
    return total;
  }
};

struct SpecMachine {
  std::optional<BlockGraph> graph;  // FiniteForbidden / SymbolRule overlay
};

}  // namespace detail

namespace {

// 3-state follower automaton for the even shift, reading left to right.
// States: 0 = no 1 seen, 1 = even run of 0s since the last 1, 2 = odd run.
constexpr int kEvenDead = -1;

int even_step(int state, Symbol a) {
  if (a > 1) return kEvenDead;
  switch (state) {
    case 0:
      return a == 0 ? 0 : 1;
    case 1:
      return a == 0 ? 2 : 1;
    case 2:
      return a == 0 ? 1 : kEvenDead;
    default:
      return kEvenDead;
  }
}

bool even_admissible(const Word& w) {
  int state = 0;
  for (Symbol a : w.symbols()) {
    state = even_step(state, a);
    if (state == kEvenDead) return false;
  }
  return true;
}

}  // namespace

SubshiftSpec::SubshiftSpec() = default;
SubshiftSpec::~SubshiftSpec() = default;
SubshiftSpec::SubshiftSpec(const SubshiftSpec&) = default;
SubshiftSpec::SubshiftSpec(SubshiftSpec&&) noexcept = default;
SubshiftSpec& SubshiftSpec::operator=(const SubshiftSpec&) = default;
SubshiftSpec& SubshiftSpec::operator=(SubshiftSpec&&) noexcept = default;

SubshiftSpec SubshiftSpec::finite_forbidden(std::uint32_t alphabet_size,
                                            std::vector<Word> forbidden) {
  SubshiftSpec s;
  s.kind_ = Kind::FiniteForbidden;
  s.ff_.alphabet_size = alphabet_size;
  s.ff_.forbidden = std::move(forbidden);
  s.finalize();
  return s;
}

SubshiftSpec SubshiftSpec::even_shift() {
  SubshiftSpec s;
  s.kind_ = Kind::EvenShift;
  s.finalize();
  return s;
}

SubshiftSpec SubshiftSpec::symbol_rule(std::vector<Symbol> allowed, std::vector<Word> overlay) {
  SubshiftSpec s;
  s.kind_ = Kind::SymbolRule;
  s.sr_.allowed = std::move(allowed);
  s.sr_.overlay = std::move(overlay);
  s.finalize();
  return s;
}

SubshiftSpec SubshiftSpec::disjoint_families(std::vector<Word> generators) {
  SubshiftSpec s;
  s.kind_ = Kind::DisjointFamilies;
  s.df_.generators = std::move(generators);
  s.finalize();
  return s;
}

void SubshiftSpec::finalize() {
  auto machine = std::make_shared<detail::SpecMachine>();
  switch (kind_) {
    case Kind::FiniteForbidden: {
      if (ff_.alphabet_size == 0) throw EmptySubshift("alphabet is empty");
      for (const Word& f : ff_.forbidden) {
        if (f.empty()) throw InvalidUsage("forbidden words must be nonempty");
        for (Symbol a : f.symbols())
          if (a >= ff_.alphabet_size)
            throw InvalidUsage("forbidden word uses symbol outside the alphabet: " + f.str());
      }
      ff_.forbidden = reduce_forbidden(std::move(ff_.forbidden));
      std::vector<Symbol> alphabet(ff_.alphabet_size);
      for (Symbol a = 0; a < ff_.alphabet_size; ++a) alphabet[a] = a;
      machine->graph = detail::BlockGraph::build(std::move(alphabet), ff_.forbidden);
      if (!machine->graph->any_left_viable())
        throw EmptySubshift("every point contains a forbidden word");
      break;
    }
    case Kind::EvenShift:
      break;
    case Kind::SymbolRule: {
      std::sort(sr_.allowed.begin(), sr_.allowed.end());
      sr_.allowed.erase(std::unique(sr_.allowed.begin(), sr_.allowed.end()), sr_.allowed.end());
      if (sr_.allowed.empty()) throw EmptySubshift("allowed symbol set is empty");
      sr_.overlay = reduce_forbidden(std::move(sr_.overlay));
      // Length-1 overlay words just shrink the allowed set.
      std::vector<Word> kept;
      for (const Word& f : sr_.overlay) {
        for (Symbol a : f.symbols())
          if (!std::binary_search(sr_.allowed.begin(), sr_.allowed.end(), a))
            throw InvalidUsage("overlay word uses a disallowed symbol: " + f.str());
        if (f.size() == 1)
          sr_.allowed.erase(std::remove(sr_.allowed.begin(), sr_.allowed.end(), f[0]),
                            sr_.allowed.end());
        else
          kept.push_back(f);
      }
      if (sr_.allowed.empty()) throw EmptySubshift("overlay forbids every allowed symbol");
      std::vector<Word> overlay;
      for (const Word& f : kept) {
        bool valid = true;
        for (Symbol a : f.symbols())
          valid = valid && std::binary_search(sr_.allowed.begin(), sr_.allowed.end(), a);
        if (valid) overlay.push_back(f);  // words touching removed symbols are redundant
      }
      sr_.overlay = std::move(overlay);
      machine->graph = detail::BlockGraph::build(sr_.allowed, sr_.overlay);
      if (!machine->graph->any_left_viable())
        throw EmptySubshift("overlay leaves no admissible point");
      break;
    }
    case Kind::DisjointFamilies: {
      if (df_.generators.empty()) throw InvalidUsage("no generator words given");
      Symbol maxsym = 0;
      std::set<Symbol> seen;
      for (const Word& g : df_.generators) {
        if (g.empty()) throw InvalidUsage("generator words must be nonempty");
        for (Symbol a : g.symbols()) {
          maxsym = std::max(maxsym, a);
          if (!seen.insert(a).second && [&] {
                // same symbol twice within one generator is fine; across
                // generators it is not
                int owners = 0;
                for (const Word& h : df_.generators)
                  if (std::find(h.symbols().begin(), h.symbols().end(), a) != h.symbols().end())
                    ++owners;
                return owners > 1;
              }())
            throw InvalidUsage("generator symbol sets must be pairwise disjoint");
        }
      }
      df_.stride = maxsym + 1;
      // K is never empty: points alternating between two symbols from
      // distinct fresh blocks avoid every expanded word.
      break;
    }
  }
  machine_ = std::move(machine);
}

bool SubshiftSpec::countable_alphabet() const {
  return kind_ == Kind::SymbolRule || kind_ == Kind::DisjointFamilies;
}

std::uint32_t SubshiftSpec::finite_alphabet_size() const {
  switch (kind_) {
    case Kind::FiniteForbidden:
      return ff_.alphabet_size;
    case Kind::EvenShift:
      return 2;
    default:
      throw InvalidUsage("countable alphabet has no finite size");
  }
}

const FiniteForbidden& SubshiftSpec::ff() const {
  if (kind_ != Kind::FiniteForbidden) throw InvalidUsage("not a finite-forbidden spec");
  return ff_;
}
const SymbolRule& SubshiftSpec::sr() const {
  if (kind_ != Kind::SymbolRule) throw InvalidUsage("not a symbol-rule spec");
  return sr_;
}
const DisjointFamilies& SubshiftSpec::df() const {
  if (kind_ != Kind::DisjointFamilies) throw InvalidUsage("not a disjoint-families spec");
  return df_;
}

std::size_t SubshiftSpec::max_forbidden_len() const {
  switch (kind_) {
    case Kind::FiniteForbidden: {
      std::size_t m = 0;
      for (const Word& f : ff_.forbidden) m = std::max(m, f.size());
      return m;
    }
    case Kind::SymbolRule: {
      std::size_t m = 1;
      for (const Word& f : sr_.overlay) m = std::max(m, f.size());
      return m;
    }
    default:
      return 0;
  }
}

bool SubshiftSpec::factor_admissible(const Word& w) const {
  switch (kind_) {
    case Kind::FiniteForbidden:
      for (Symbol a : w.symbols())
        if (a >= ff_.alphabet_size) return false;
      return !contains_any_factor(w, ff_.forbidden);
    case Kind::EvenShift:
      return even_admissible(w);
    case Kind::SymbolRule:
      for (Symbol a : w.symbols())
        if (!std::binary_search(sr_.allowed.begin(), sr_.allowed.end(), a)) return false;
      return !contains_any_factor(w, sr_.overlay);
    case Kind::DisjointFamilies: {
      const auto& syms = w.symbols();
      for (std::size_t p = 0; p < syms.size(); ++p) {
        for (std::size_t i = 0; i < df_.generators.size(); ++i) {
          if (df_.offset_of(syms[p]) != df_.generators[i].front()) continue;
          Symbol block = df_.block_of(syms[p]);
          std::size_t flen = df_.generators[i].size() * (std::size_t(block) + 1);
          if (p + flen > syms.size()) continue;
          Word f = df_.expand(i, block);
          if (std::equal(f.symbols().begin(), f.symbols().end(), syms.begin() + p)) return false;
        }
      }
      return true;
    }
  }
  return false;
}

bool SubshiftSpec::contains(const Point& x) const {
  std::size_t t = x.transient().size();
  std::size_t p = x.period().size();
  std::size_t window = t + 3 * p + 2;
  switch (kind_) {
    case Kind::FiniteForbidden:
      window += max_forbidden_len();
      break;
    case Kind::SymbolRule:
      window += max_forbidden_len();
      break;
    case Kind::EvenShift:
      break;
    case Kind::DisjointFamilies: {
      std::size_t fmax = 0;
      std::set<Symbol> syms(x.period().symbols().begin(), x.period().symbols().end());
      syms.insert(x.transient().symbols().begin(), x.transient().symbols().end());
      for (Symbol s : syms)
        for (std::size_t i = 0; i < df_.generators.size(); ++i) {
          const auto& gs = df_.generators[i].symbols();
          if (std::find(gs.begin(), gs.end(), df_.offset_of(s)) == gs.end()) continue;
          fmax = std::max(fmax, df_.generators[i].size() * (std::size_t(df_.block_of(s)) + 1));
        }
      window += 2 * fmax;
      break;
    }
  }
  return factor_admissible(point_suffix(x, window));
}

bool SubshiftSpec::suffix_ok(const Word& w) const {
  if (w.empty()) return true;
  if (!factor_admissible(w)) return false;
  switch (kind_) {
    case Kind::FiniteForbidden:
    case Kind::SymbolRule:
      return machine_->graph->suffix_viable(w);
    case Kind::EvenShift:
    case Kind::DisjointFamilies:
      // Any admissible word extends leftward: zeros for the even shift,
      // an alternating pair of fresh-block symbols for families.
      return true;
  }
  return false;
}

std::vector<Word> SubshiftSpec::suffix_language(std::size_t n, Symbol horizon) const {
  if (n == 0) throw InvalidUsage("suffix_language needs n >= 1");
  std::vector<Word> words;
  switch (kind_) {
    case Kind::FiniteForbidden:
    case Kind::SymbolRule: {
      BigInt total = machine_->graph->count_suffixes(n);
      if (total > kMaxEnumeration) throw InvalidUsage("suffix language too large to enumerate");
      machine_->graph->enumerate_suffixes(n, words);
      break;
    }
    case Kind::EvenShift: {
      if (n > 22) throw InvalidUsage("suffix language too large to enumerate");
      for (std::size_t bits = 0; bits < (std::size_t(1) << n); ++bits) {
        std::vector<Symbol> syms(n);
        for (std::size_t i = 0; i < n; ++i) syms[i] = (bits >> (n - 1 - i)) & 1;
        Word w{std::move(syms)};
        if (even_admissible(w)) words.push_back(w);
      }
      break;
    }
    case Kind::DisjointFamilies: {
      double total = std::pow(double(horizon) + 1.0, double(n));
      if (total > double(kMaxEnumeration))
        throw InvalidUsage("suffix language enumeration exceeds the horizon budget");
      std::vector<Symbol> cur;
      std::function<void()> rec = [&]() {
        if (cur.size() == n) {
          Word w{std::vector<Symbol>(cur)};
          if (factor_admissible(w)) words.push_back(w);
          return;
        }
        for (Symbol a = 0; a <= horizon; ++a) {
          cur.push_back(a);
          rec();
          cur.pop_back();
        }
      };
      rec();
      break;
    }
  }
  std::sort(words.begin(), words.end());
  return words;
}

BigInt SubshiftSpec::suffix_count(std::size_t n, Symbol horizon) const {
  switch (kind_) {
    case Kind::FiniteForbidden:
    case Kind::SymbolRule:
      return machine_->graph->count_suffixes(n);
    case Kind::EvenShift: {
      // DP over the follower automaton.
      BigInt dp[3] = {1, 0, 0};
      for (std::size_t i = 0; i < n; ++i) {
        BigInt next[3] = {0, 0, 0};
        for (int s = 0; s < 3; ++s)
          for (Symbol a = 0; a < 2; ++a) {
            int to = even_step(s, a);
            if (to != kEvenDead) next[to] += dp[s];
          }
        for (int s = 0; s < 3; ++s) dp[s] = next[s];
      }
      return dp[0] + dp[1] + dp[2];
    }
    case Kind::DisjointFamilies:
      return BigInt(suffix_language(n, horizon).size());
  }
  return 0;
}

TransitionGraph SubshiftSpec::essential_graph() const {
  if (kind_ != Kind::FiniteForbidden)
    throw InvalidUsage("essential_graph requires a finite forbidden-word spec");
  const auto& g = *machine_->graph;
  TransitionGraph out;
  out.memory = g.memory;
  std::vector<std::size_t> remap(g.blocks.size(), SIZE_MAX);
  for (std::size_t i = 0; i < g.blocks.size(); ++i) {
    if (!g.essential[i]) continue;
    remap[i] = out.vertices.size();
    out.vertices.push_back(g.blocks[i]);
  }
  if (out.vertices.empty()) throw EmptySubshift("transition graph pruned to nothing");
  for (std::size_t i = 0; i < g.blocks.size(); ++i) {
    if (remap[i] == SIZE_MAX) continue;
    for (const auto& e : g.out[i])
      if (remap[e.to] != SIZE_MAX) out.edges.push_back({remap[i], remap[e.to], e.sym});
  }
  return out;
}

std::optional<Point> SubshiftSpec::point_ending(const Word& u) const {
  if (!suffix_ok(u)) return std::nullopt;
  switch (kind_) {
    case Kind::EvenShift: {
      // Zeros extend any admissible word.
      Point x(Word{0}, u);
      return x;
    }
    case Kind::DisjointFamilies: {
      // Alternate two symbols from fresh blocks; expanded words live
      // inside a single block, so the tail can never complete one.
      Symbol maxblock = 0;
      for (Symbol a : u.symbols()) maxblock = std::max(maxblock, df_.block_of(a));
      Symbol o = df_.generators[0].front();
      Symbol t1 = (maxblock + 1) * df_.stride + o;
      Symbol t2 = (maxblock + 2) * df_.stride + o;
      Point x(Word{t1, t2}, u);
      return x;
    }
    case Kind::FiniteForbidden:
    case Kind::SymbolRule: {
      const auto& g = *machine_->graph;
      if (g.block_len == 0) {
        // Memory 1: any single allowed symbol loops.
        for (Symbol a : g.alphabet) {
          Word w{a};
          if (!contains_any_factor(w, g.forbidden)) return Point(Word{a}, u);
        }
        return std::nullopt;
      }
      // Pad u to a full viable block, then walk in-edges until a vertex
      // repeats; the loop spells the period.
      Word padded = u;
      if (u.size() < g.block_len) {
        bool found = false;
        std::vector<Symbol> cur;
        std::function<bool()> rec = [&]() -> bool {
          if (cur.size() == g.block_len - u.size()) {
            std::vector<Symbol> full = cur;
            full.insert(full.end(), u.symbols().begin(), u.symbols().end());
            Word fw{std::move(full)};
            if (contains_any_factor(fw, g.forbidden)) return false;
            auto it = g.index.find(fw);
            if (it == g.index.end() || !g.left_viable[it->second]) return false;
            padded = fw;
            return true;
          }
          for (Symbol a : g.alphabet) {
            cur.push_back(a);
            if (rec()) return true;
            cur.pop_back();
          }
          return false;
        };
        found = rec();
        if (!found) return std::nullopt;
      }
      std::vector<Symbol> head(padded.symbols().begin(),
                               padded.symbols().begin() + g.block_len);
      std::size_t v0 = g.index.at(Word{std::move(head)});

      // In-edges restricted to left-viable vertices; pruning guarantees
      // each viable vertex keeps at least one.
      auto pred_of = [&](std::size_t v) -> std::pair<std::size_t, Symbol> {
        for (std::size_t i = 0; i < g.blocks.size(); ++i) {
          if (!g.left_viable[i]) continue;
          for (const auto& e : g.out[i])
            if (e.to == v) return {i, e.sym};
        }
        throw std::logic_error("left-viable vertex without viable predecessor");
      };

      std::vector<std::size_t> chain{v0};
      std::vector<Symbol> syms_into;  // syms_into[k]: symbol on edge chain[k+1] -> chain[k]
      std::map<std::size_t, std::size_t> seen{{v0, 0}};
      for (;;) {
        auto [prev, sym] = pred_of(chain.back());
        syms_into.push_back(sym);
        auto it = seen.find(prev);
        if (it != seen.end()) {
          std::size_t i = it->second;  // chain[i] == prev, cycle over chain[i..]
          // Forward symbol order is deepest-first: reverse the backward walk.
          std::vector<Symbol> period(syms_into.begin() + i, syms_into.end());
          std::reverse(period.begin(), period.end());
          std::vector<Symbol> trans(syms_into.begin(), syms_into.begin() + i);
          std::reverse(trans.begin(), trans.end());
          trans.insert(trans.end(), padded.symbols().begin() + g.block_len,
                       padded.symbols().end());
          Point x(Word{std::move(period)}, Word{std::move(trans)});
          if (!contains(x) || point_suffix(x, u.size()) != u)
            throw std::logic_error("point_ending produced an invalid point");
          return x;
        }
        seen[prev] = chain.size();
        chain.push_back(prev);
      }
    }
  }
  return std::nullopt;
}

std::vector<Symbol> SubshiftSpec::symbols_up_to(Symbol horizon) const {
  std::vector<Symbol> out;
  if (countable_alphabet()) {
    for (Symbol a = 0; a <= horizon; ++a) out.push_back(a);
  } else {
    for (Symbol a = 0; a < finite_alphabet_size(); ++a) out.push_back(a);
  }
  return out;
}

std::string SubshiftSpec::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::FiniteForbidden: {
      out << "finite alphabet n=" << ff_.alphabet_size << ", forbidden:";
      if (ff_.forbidden.empty()) out << " (none)";
      for (const Word& f : ff_.forbidden) out << ' ' << f.str();
      break;
    }
    case Kind::EvenShift:
      out << "even shift (binary sofic)";
      break;
    case Kind::SymbolRule: {
      out << "countable alphabet, allowed:";
      for (Symbol a : sr_.allowed) out << ' ' << a;
      if (!sr_.overlay.empty()) {
        out << ", overlay:";
        for (const Word& f : sr_.overlay) out << ' ' << f.str();
      }
      break;
    }
    case Kind::DisjointFamilies: {
      out << "countable alphabet, families:";
      for (const Word& g : df_.generators) out << ' ' << g.str();
      out << " (stride " << df_.stride << ")";
      break;
    }
  }
  return out.str();
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> parts;
  std::string tok;
  while (in >> tok) parts.push_back(tok);
  return parts;
}

}  // namespace

SubshiftSpec SubshiftSpec::parse_string(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  bool have_alphabet = false;
  bool finite = false;
  std::uint32_t alphabet_size = 0;

  enum class Principal { None, Forbidden, Even, Allow, Family };
  Principal principal = Principal::None;
  std::vector<Word> forbidden;
  std::vector<Symbol> allowed;
  std::vector<Word> overlay;
  std::vector<Word> generators;
  WeightsDecl weights;

  auto parse_word_list = [&](const std::vector<std::string>& parts, std::size_t from) {
    std::vector<Word> words;
    for (std::size_t i = from; i < parts.size(); ++i) {
      try {
        words.push_back(Word::parse(parts[i]));
      } catch (const std::exception& e) {
        throw ParseError(lineno, e.what());
      }
    }
    return words;
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto parts = split_ws(line);
    if (parts.empty()) continue;
    const std::string& dir = parts[0];

    if (dir == "alphabet") {
      if (have_alphabet) throw ParseError(lineno, "duplicate alphabet directive");
      if (parts.size() >= 2 && parts[1] == "countable") {
        if (parts.size() != 2) throw ParseError(lineno, "alphabet countable takes no size");
        finite = false;
      } else if (parts.size() == 3 && parts[1] == "finite") {
        try {
          alphabet_size = static_cast<std::uint32_t>(std::stoul(parts[2]));
        } catch (const std::exception&) {
          throw ParseError(lineno, "malformed alphabet size");
        }
        finite = true;
      } else {
        throw ParseError(lineno, "expected `alphabet finite <n>` or `alphabet countable`");
      }
      have_alphabet = true;
      continue;
    }
    if (!have_alphabet) throw ParseError(lineno, "alphabet directive must come first");

    if (dir == "forbidden") {
      if (principal == Principal::Allow) {
        overlay = parse_word_list(parts, 1);  // overlay on the allowed set
      } else if (principal == Principal::None) {
        if (!finite) throw ParseError(lineno, "countable alphabets need `allow` or `family`");
        principal = Principal::Forbidden;
        forbidden = parse_word_list(parts, 1);
      } else {
        throw ParseError(lineno, "conflicting directives");
      }
    } else if (dir == "builtin") {
      if (parts.size() != 2 || parts[1] != "even")
        throw ParseError(lineno, "only `builtin even` is supported");
      if (!finite || alphabet_size != 2)
        throw ParseError(lineno, "builtin even requires `alphabet finite 2`");
      if (principal != Principal::None) throw ParseError(lineno, "conflicting directives");
      principal = Principal::Even;
    } else if (dir == "allow") {
      if (finite) throw ParseError(lineno, "`allow` requires a countable alphabet");
      if (principal != Principal::None) throw ParseError(lineno, "conflicting directives");
      if (parts.size() < 2) throw ParseError(lineno, "`allow` needs at least one symbol");
      for (std::size_t i = 1; i < parts.size(); ++i) {
        if (parts[i].find_first_not_of("0123456789") != std::string::npos)
          throw ParseError(lineno, "malformed symbol: " + parts[i]);
        allowed.push_back(static_cast<Symbol>(std::stoul(parts[i])));
      }
      principal = Principal::Allow;
    } else if (dir == "family") {
      if (finite) throw ParseError(lineno, "`family` requires a countable alphabet");
      if (principal != Principal::None) throw ParseError(lineno, "conflicting directives");
      if (parts.size() < 2) throw ParseError(lineno, "`family` needs at least one generator");
      generators = parse_word_list(parts, 1);
      principal = Principal::Family;
    } else if (dir == "weights") {
      if (parts.size() == 2 && parts[1] == "uniform") {
        weights.kind = WeightsDecl::Kind::Uniform;
      } else if (parts.size() == 3 && parts[1] == "geometric") {
        weights.kind = WeightsDecl::Kind::Geometric;
        try {
          weights.q = parse_rational(parts[2]);
        } catch (const std::exception& e) {
          throw ParseError(lineno, e.what());
        }
        if (!(weights.q > 0 && weights.q < 1))
          throw ParseError(lineno, "geometric ratio must lie in (0,1)");
      } else {
        throw ParseError(lineno, "expected `weights uniform` or `weights geometric p/r`");
      }
    } else {
      throw ParseError(lineno, "unknown directive: " + dir);
    }
  }

  if (!have_alphabet) throw ParseError(lineno, "missing alphabet directive");
  if (finite && weights.kind == WeightsDecl::Kind::Geometric)
    throw ParseError(lineno, "geometric weights require a countable alphabet");
  if (!finite && weights.kind == WeightsDecl::Kind::Uniform)
    throw ParseError(lineno, "uniform weights require a finite alphabet");

  SubshiftSpec spec;
  switch (principal) {
    case Principal::None:
      if (!finite) throw ParseError(lineno, "countable alphabets need `allow` or `family`");
      spec = finite_forbidden(alphabet_size, {});  // full shift
      break;
    case Principal::Forbidden:
      spec = finite_forbidden(alphabet_size, std::move(forbidden));
      break;
    case Principal::Even:
      spec = even_shift();
      break;
    case Principal::Allow:
      spec = symbol_rule(std::move(allowed), std::move(overlay));
      break;
    case Principal::Family:
      spec = disjoint_families(std::move(generators));
      break;
  }
  spec.weights_ = weights;
  return spec;
}

SubshiftSpec SubshiftSpec::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open spec file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

}  // namespace gshift
