#ifndef GSHIFT_GFUN_HPP
#define GSHIFT_GFUN_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gshift/core.hpp"
#include "gshift/exitset.hpp"
#include "gshift/rational.hpp"
#include "gshift/subshift.hpp"

namespace gshift {

// Strictly positive weights summing to 1: uniform over a finite alphabet
// or lambda_a = (1-q) q^a over the countable one.  All arithmetic exact.
class WeightSeq {
 public:
  static WeightSeq uniform(std::uint32_t n);
  static WeightSeq geometric(Rational q);

  bool geometric_kind() const { return geometric_; }
  std::uint32_t size() const { return n_; }  // uniform only
  const Rational& ratio() const { return q_; }

  Rational lambda(Symbol a) const;
  // sum_{a > H} lambda_a; zero for uniform weights once H covers the
  // alphabet.
  Rational tail_mass(Symbol H) const;
  // sum_{j >= 0} lambda_{first + j*stride} (geometric only).
  Rational strided_mass(Symbol first, Symbol stride) const;

  std::string str() const;

 private:
  bool geometric_ = false;
  std::uint32_t n_ = 0;
  Rational q_;
};

// The declared weights of a spec file, or the defaults (uniform for
// finite alphabets, geometric 1/2 for countable ones).
WeightSeq weights_for(const SubshiftSpec& spec);

// Escape data for the weighted construction at depth m: every length-m
// exit-witness word w, grouped by its length-(m-1) prefix class, has
// word_replace_last(w, b(class)) outside E_m.
struct GCertificate {
  std::size_t m = 0;
  std::map<Word, Symbol> escape;  // class word -> b

  std::string str() const;
};

struct CertifyResult {
  enum class Kind { Certified, Refuted, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<GCertificate> cert;
  std::optional<Point> refutation;  // all one-symbol extensions land in closure(E_K)
};

// Search m = 1..m_max for the smallest certificate depth, choosing the
// smallest escape symbol per class.  Finite alphabets with a nonempty E_1
// start at m = 2; countable specs may certify at m = 1 (single empty
// class).  Refuted carries a point none of whose extensions up to the
// horizon escape, when the spec structure rules out larger escapes.
CertifyResult certify_property_g(const WitnessTable& table, std::size_t m_max, Symbol horizon);

// An evaluable g-function with provenance.  Enclosures are exact rational
// intervals; for the shipped spec families the countable sums collapse to
// closed forms, so lo == hi whenever the inputs are determined.
class GFunction {
 public:
  enum class Variant { KriegerReciprocal, WeightedDistance, BaselineWeights };

  // Reciprocal of cylinder depths; finite alphabets only, and property G
  // must have been certified first.  All factories take the table by
  // value: a GFunction is self-contained.
  static GFunction krieger(WitnessTable table);
  static GFunction weighted(WitnessTable table, GCertificate cert, WeightSeq weights);
  // lambda_{x_0} everywhere; not invariant in general (negative control).
  static GFunction baseline(WitnessTable table, WeightSeq weights);

  Variant variant() const { return variant_; }
  const SubshiftSpec& spec() const { return table_.spec(); }
  const WitnessTable& table() const { return table_; }
  const WeightSeq& weights() const { return weights_; }
  const GCertificate* certificate() const {
    return variant_ == Variant::WeightedDistance ? &cert_ : nullptr;
  }

  // Enclosure of g(z) with width <= eps (width 0 whenever the value is
  // structurally exact, which covers every shipped family).
  RatInterval eval(const Point& z, const Rational& eps) const;

  // Enclosure of sum_a g((x,a)); exact tail handling over countable
  // alphabets.
  RatInterval sum_over_preimages(const Point& x, const Rational& eps) const;

  // b-branch evaluation with a hard truncation at symbol H and the
  // geometric tail bounded only by sum lambda; exercises the tail
  // identity the closed forms rely on.
  RatInterval eval_truncated(const Point& z, Symbol H) const;

  std::string variant_name() const;

 private:
  GFunction(Variant variant, WitnessTable table, GCertificate cert, WeightSeq weights)
      : variant_(variant),
        table_(std::move(table)),
        cert_(std::move(cert)),
        weights_(std::move(weights)) {}

  Variant variant_;
  WitnessTable table_;
  GCertificate cert_;
  WeightSeq weights_;
};

// One verification line: `check <name> <point> <lo> <hi> <verdict>`.
struct CheckLine {
  std::string name;
  std::string point;
  Rational lo, hi;
  bool pass;
};

struct Report {
  std::vector<CheckLine> lines;
  bool pass = true;

  void add(CheckLine line);
  std::string tsv() const;
};

// Seeded eventually periodic points; deterministic across platforms.
std::vector<Point> sample_points(const SubshiftSpec& spec, std::size_t count,
                                 std::uint64_t seed, Symbol horizon);
// As above but restricted to K (constructively completed when rejection
// sampling runs dry).
std::vector<Point> sample_k_points(const SubshiftSpec& spec, std::size_t count,
                                   std::uint64_t seed, Symbol horizon);

// Eq. (1): sum over the preimages of each sampled point encloses 1.
Report verify_sum_one(const GFunction& g, const std::vector<Point>& bases, const Rational& eps,
                      Symbol horizon);

// Eq. (2): g vanishes exactly on enumerated exit points.
Report verify_invariance(const GFunction& g, std::size_t samples, Symbol horizon);

// Strictness of the weighted construction: exact zeros on closure points,
// certified positive lower bounds away from them.
Report verify_strict(const GFunction& g, std::size_t samples, Symbol horizon);

enum class PositiveVerdict { Holds, FailsAt, NotApplicable, Undetermined };

struct PositiveReport {
  PositiveVerdict verdict = PositiveVerdict::Undetermined;
  std::optional<Point> witness;  // FailsAt: zero on K; NotApplicable: K meets closure
  Report details;

  std::string verdict_name() const;
};

// Prop.-3 style check: Holds under a certified gap, NotApplicable when K
// meets closure(E_K) (no strictly positive g exists at all), FailsAt on a
// concrete zero, Undetermined otherwise.
PositiveReport verify_strictly_positive(const GFunction& g, std::size_t samples, Symbol horizon);

}  // namespace gshift

#endif
