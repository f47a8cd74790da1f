#ifndef GSHIFT_SUBSHIFT_HPP
#define GSHIFT_SUBSHIFT_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gshift/core.hpp"

namespace gshift {

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

// The declared subshift is empty (e.g. every symbol forbidden).
struct EmptySubshift : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation applied outside its stated preconditions.
struct InvalidUsage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite alphabet {0..n-1} with a finite forbidden-word list (an SFT when
// used directly; the list is reduced at load so no member contains
// another as a factor).
struct FiniteForbidden {
  std::uint32_t alphabet_size = 0;
  std::vector<Word> forbidden;  // reduced, shortlex-sorted
};

// Binary sofic shift: between any two 1s there is an even number of 0s.
struct EvenShift {};

// Countable alphabet restricted to an explicit finite allowed set S, with
// an optional forbidden-word overlay on S.
struct SymbolRule {
  std::vector<Symbol> allowed;  // sorted, nonempty
  std::vector<Word> overlay;    // reduced; all symbols in `allowed`
};

// Countable alphabet with forbidden words expand(g, k) for each generator
// g and index k >= 0: the generator's symbols shifted into block k (stride
// = max generator symbol + 1) and the shifted word repeated k+1 times.
// Generators use pairwise-disjoint symbol sets, so no two expanded words
// share a symbol.
struct DisjointFamilies {
  std::vector<Word> generators;
  Symbol stride = 1;

  Symbol block_of(Symbol a) const { return a / stride; }
  Symbol offset_of(Symbol a) const { return a % stride; }
  Word expand(std::size_t gen, Symbol block) const;
};

struct WeightsDecl {
  enum class Kind { Default, Uniform, Geometric };
  Kind kind = Kind::Default;
  Rational q;  // geometric ratio, in (0,1)
};

// Vertices are the admissible (M-1)-blocks that survive iterated removal
// of vertices lacking a predecessor or successor; edges are admissible
// M-block overlaps.
struct TransitionGraph {
  struct Edge {
    std::size_t from, to;
    Symbol sym;
  };
  std::size_t memory = 1;      // M
  std::vector<Word> vertices;  // (M-1)-blocks; the empty word when M == 1
  std::vector<Edge> edges;
};

namespace detail {
struct SpecMachine;  // precomputed graphs / automata
}

// A declarative description of the subshift K, normalized and validated
// (EmptySubshift is thrown at load when K = empty set).  All query methods
// are pure and thread-safe after construction.
class SubshiftSpec {
 public:
  enum class Kind { FiniteForbidden, EvenShift, SymbolRule, DisjointFamilies };

  static SubshiftSpec finite_forbidden(std::uint32_t alphabet_size, std::vector<Word> forbidden);
  static SubshiftSpec even_shift();
  static SubshiftSpec symbol_rule(std::vector<Symbol> allowed, std::vector<Word> overlay = {});
  static SubshiftSpec disjoint_families(std::vector<Word> generators);

  static SubshiftSpec parse_string(const std::string& text);
  static SubshiftSpec parse_file(const std::string& path);

  Kind kind() const { return kind_; }
  bool countable_alphabet() const;
  // Valid for finite alphabets only.
  std::uint32_t finite_alphabet_size() const;

  const FiniteForbidden& ff() const;
  const SymbolRule& sr() const;
  const DisjointFamilies& df() const;
  const WeightsDecl& weights() const { return weights_; }

  // Structural check: true iff a finite forbidden list over a finite
  // alphabet.  Semantic finite-typeness of sofic presentations is out of
  // scope.
  bool is_declared_finite_type() const { return kind_ == Kind::FiniteForbidden; }

  // Longest forbidden word that can end a visible violation: the reduced
  // list's maximum for FiniteForbidden, the overlay maximum (at least 1)
  // for SymbolRule.  Unbounded families return 0.
  std::size_t max_forbidden_len() const;

  bool factor_admissible(const Word& w) const;
  bool contains(const Point& x) const;

  // Membership in the suffix language: some x in K ends with w.  The
  // empty word is vacuously a suffix (K is nonempty).
  bool suffix_ok(const Word& w) const;

  // All length-n suffix-language words; countable alphabets enumerate
  // symbols 0..horizon only.
  std::vector<Word> suffix_language(std::size_t n, Symbol horizon = 0) const;
  BigInt suffix_count(std::size_t n, Symbol horizon = 0) const;

  // FiniteForbidden only.
  TransitionGraph essential_graph() const;

  std::vector<Symbol> symbols_up_to(Symbol horizon) const;

  // Some eventually periodic K-point ending with u, when u is in the
  // suffix language; deterministic choice.
  std::optional<Point> point_ending(const Word& u) const;

  std::string describe() const;

  ~SubshiftSpec();
  SubshiftSpec(const SubshiftSpec&);
  SubshiftSpec(SubshiftSpec&&) noexcept;
  SubshiftSpec& operator=(const SubshiftSpec&);
  SubshiftSpec& operator=(SubshiftSpec&&) noexcept;

 private:
  SubshiftSpec();
  void finalize();  // normalize + validate + build machines

  Kind kind_ = Kind::FiniteForbidden;
  FiniteForbidden ff_;
  SymbolRule sr_;
  DisjointFamilies df_;
  WeightsDecl weights_;
  std::shared_ptr<const detail::SpecMachine> machine_;

  friend struct detail::SpecMachine;
};

// Reduce a forbidden list so no member contains another as a factor.
std::vector<Word> reduce_forbidden(std::vector<Word> forbidden);

}  // namespace gshift

#endif
