#ifndef GSHIFT_EXITSET_HPP
#define GSHIFT_EXITSET_HPP

#include <optional>
#include <vector>

#include "gshift/core.hpp"
#include "gshift/subshift.hpp"

namespace gshift {

// How a witness set W_m was certified.  Exact requires a finite-forbidden
// spec and probe depth >= m + number of essential-graph vertices (the
// pumping bound); everything else is reported DepthBounded even though
// the per-family predicates decide membership exactly.
enum class CertStatus { Exact, DepthBounded };

// Per-depth exit-witness queries against a spec: W_m is the set of
// length-m words whose cylinder meets closure(E_K).  Membership is decided
// by a per-family predicate; sets are enumerated on demand.  Immutable and
// thread-safe.
class WitnessTable {
 public:
  // Stores its own copy of the spec (copies share the heavy precomputed
  // machinery), so tables never dangle.
  WitnessTable(SubshiftSpec spec, std::size_t probe_depth);

  const SubshiftSpec& spec() const { return spec_; }
  std::size_t probe_depth() const { return depth_; }

  // w in W_{|w|}: some exit point ends with w.
  bool is_witness(const Word& w) const;

  // W_m, restricted to symbols <= horizon for countable alphabets.
  std::vector<Word> witnesses(std::size_t m, Symbol horizon = 0) const;

  CertStatus status(std::size_t m) const;

 private:
  SubshiftSpec spec_;
  std::size_t depth_;
  std::size_t essential_vertices_ = 0;
};

// w in W_{|w|}: some exit point ends with w.  WitnessTable::is_witness
// delegates here.
bool is_exit_witness(const SubshiftSpec& spec, const Word& w);

// x in closure(E_K), decided exactly for eventually periodic points.
bool closure_member(const SubshiftSpec& spec, const Point& x);

// Largest m such that point_suffix(x, m) is a witness; nullopt when every
// suffix is (x lies in closure(E_K)).  0 means even the length-1 suffix
// is not a witness.
std::optional<std::size_t> max_witness_depth(const SubshiftSpec& spec, const Point& x);

// rho(x, closure(E_K)) = 2^{-k} with k = max_witness_depth, 0 on closure
// members, 1 when no suffix matches (or when the exit set is empty).
Dyadic distance_to_exit(const WitnessTable& table, const Point& x);

// n(x): least n >= 1 with the cylinder on x_{[-n,0]} disjoint from
// closure(E_K); infinite exactly on closure members.
struct NValue {
  bool finite;
  std::size_t n;  // meaningful when finite

  static NValue infinite() { return {false, 0}; }
  static NValue of(std::size_t n) { return {true, n}; }
};
NValue n_of_x(const WitnessTable& table, const Point& x);

// Delta_1^+(x) truncated to symbols <= horizon: the a with (x,a) outside
// closure(E_K).
std::vector<Symbol> delta_plus(const WitnessTable& table, const Point& x, Symbol horizon);

// K vs closure(E_K).  Disjoint carries a certified lower bound on the
// distance: separation of the length-1 languages forces gap exactly 1;
// separation first seen at depth M >= 2 certifies 2^{-M} (the M-step
// bound).  Meets carries an eventually periodic point of the
// intersection.  Unknown reports the probe depth.
struct ClosureVerdict {
  enum class Kind { Disjoint, Meets, Unknown };
  Kind kind;
  Dyadic gap;                    // Disjoint only
  std::optional<Point> witness;  // Meets only
  std::size_t depth;
};
ClosureVerdict closure_meets_K(const WitnessTable& table);

// Closedness of E_K via the subshift equivalence with disjointness; the
// NotClosed witness is a closure point outside E_K (it lies in K).
struct ClosedVerdict {
  enum class Kind { Closed, NotClosed, Unknown };
  Kind kind;
  std::optional<Point> witness;
  std::size_t depth;
};
ClosedVerdict exit_set_closed(const WitnessTable& table);

// Deterministic eventually periodic exit points (verified: x outside K,
// shift(x) in K), at most `count`, symbols bounded by `horizon` on
// countable alphabets.
std::vector<Point> enumerate_exit_points(const SubshiftSpec& spec, std::size_t count,
                                         Symbol horizon = 8);

}  // namespace gshift

#endif
