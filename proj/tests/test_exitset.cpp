#include <doctest.h>

#include <random>
#include <set>

#include "gshift/exitset.hpp"
#include "oracle.hpp"

using namespace gshift;

namespace {

SubshiftSpec golden() { return SubshiftSpec::finite_forbidden(2, {Word{1, 1}}); }

std::set<Word> to_set(const std::vector<Word>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("witness sets: fixtures") {
  SubshiftSpec gm = golden();
  WitnessTable tgm(gm, 16);
  CHECK(to_set(tgm.witnesses(1)) == std::set<Word>{Word{1}});
  CHECK(to_set(tgm.witnesses(2)) == std::set<Word>{Word{1, 1}});
  CHECK(tgm.status(2) == CertStatus::Exact);  // 16 >= 2 + 2 vertices

  SubshiftSpec full = SubshiftSpec::finite_forbidden(2, {});
  WitnessTable tfull(full, 16);
  for (std::size_t m = 1; m <= 4; ++m) CHECK(tfull.witnesses(m).empty());

  SubshiftSpec even = SubshiftSpec::even_shift();
  WitnessTable teven(even, 20);
  CHECK(to_set(teven.witnesses(2)) == std::set<Word>{Word{0, 1}});
  CHECK(teven.status(2) == CertStatus::DepthBounded);
}

TEST_CASE("witness sets match the brute-force oracle") {
  SubshiftSpec gm = golden();
  WitnessTable tgm(gm, 12);
  oracle::FFOracle ogm(2, {{1, 1}});
  for (std::size_t m = 1; m <= 6; ++m)
    CHECK(to_set(tgm.witnesses(m)) == oracle::witnesses_ff(ogm, m, 12));

  SubshiftSpec even = SubshiftSpec::even_shift();
  WitnessTable teven(even, 20);
  for (std::size_t m = 1; m <= 6; ++m)
    CHECK(to_set(teven.witnesses(m)) == oracle::witnesses_even(m, 20));

  SubshiftSpec tri = SubshiftSpec::finite_forbidden(3, {Word{0, 2}, Word{1, 1, 0}});
  WitnessTable ttri(tri, 12);
  oracle::FFOracle otri(3, {{0, 2}, {1, 1, 0}});
  for (std::size_t m = 1; m <= 5; ++m)
    CHECK(to_set(ttri.witnesses(m)) == oracle::witnesses_ff(otri, m, 12));
}

TEST_CASE("witness table invariants") {
  for (auto spec : {golden(), SubshiftSpec::even_shift(),
                    SubshiftSpec::finite_forbidden(3, {Word{0, 2}, Word{1, 1, 0}})}) {
    WitnessTable table(spec, 12);
    for (std::size_t m = 2; m <= 6; ++m) {
      auto shorter = to_set(table.witnesses(m - 1));
      for (const Word& w : table.witnesses(m))
        CHECK(shorter.count(w.suffix(m - 1)) == 1);  // downward closure
    }
    // monotone refinement: deeper probes never add words
    WitnessTable deeper(spec, 16);
    for (std::size_t m = 1; m <= 6; ++m)
      CHECK(to_set(table.witnesses(m)) == to_set(deeper.witnesses(m)));
  }
}

TEST_CASE("distance_to_exit fixtures") {
  SubshiftSpec gm = golden();
  WitnessTable t(gm, 16);
  // suffix "10" and "0" are not witnesses: distance 1
  CHECK(distance_to_exit(t, Point(Word{0}, Word{1, 0})) == Dyadic::one());
  // ...011 is an exit point
  CHECK(distance_to_exit(t, Point(Word{0}, Word{1, 1})).is_zero());
  // ...01: the length-1 suffix "1" is a witness, "01" is not
  CHECK(distance_to_exit(t, Point(Word{0}, Word{1})) == Dyadic::pow2_neg(1));

  SubshiftSpec even = SubshiftSpec::even_shift();
  WitnessTable te(even, 20);
  // the limit point ...0001 lies in closure(E_K) while belonging to K
  Point limit(Word{0}, Word{1});
  CHECK(even.contains(limit));
  CHECK(distance_to_exit(te, limit).is_zero());
  CHECK(closure_member(even, limit));
  // ...0101: nearest exit shares 4 symbols
  CHECK(distance_to_exit(te, Point(Word{0, 1})) == Dyadic::pow2_neg(4));
}

TEST_CASE("n_of_x fixtures") {
  SubshiftSpec gm = golden();
  WitnessTable t(gm, 16);
  NValue a = n_of_x(t, Point(Word{0}, Word{1}));  // ends "01"
  CHECK(a.finite);
  CHECK(a.n == 1);
  NValue b = n_of_x(t, Point(Word{0}, Word{1, 1}));  // ends "11"
  CHECK(!b.finite);
  SubshiftSpec full = SubshiftSpec::finite_forbidden(2, {});
  WitnessTable tf(full, 16);
  for (auto x : {Point(Word{0}), Point(Word{1}, Word{0, 1})}) {
    NValue n = n_of_x(tf, x);
    CHECK(n.finite);
    CHECK(n.n == 1);
  }
}

TEST_CASE("delta_plus fixtures") {
  SubshiftSpec gm = golden();
  WitnessTable t(gm, 16);
  CHECK(delta_plus(t, Point(Word{0}, Word{1}), 8) == std::vector<Symbol>{0});
  CHECK(delta_plus(t, Point(Word{0}), 8) == std::vector<Symbol>{0, 1});
  SubshiftSpec full = SubshiftSpec::finite_forbidden(2, {});
  WitnessTable tf(full, 16);
  CHECK(delta_plus(tf, Point(Word{0}), 8) == std::vector<Symbol>{0, 1});
}

TEST_CASE("delta_plus agrees with appended distances") {
  std::mt19937_64 rng(41);
  for (auto spec : {golden(), SubshiftSpec::even_shift()}) {
    WitnessTable t(spec, 16);
    for (int i = 0; i < 120; ++i) {
      std::vector<Symbol> p(1 + rng() % 3), tr(rng() % 4);
      for (auto& s : p) s = rng() % 2;
      for (auto& s : tr) s = rng() % 2;
      Point x(Word{std::move(p)}, Word{std::move(tr)});
      auto delta = delta_plus(t, x, 1);
      for (Symbol a = 0; a < 2; ++a) {
        bool in_delta = std::find(delta.begin(), delta.end(), a) != delta.end();
        CHECK(in_delta == !distance_to_exit(t, append(x, a)).is_zero());
      }
    }
  }
}

TEST_CASE("closure_meets_K fixtures") {
  WitnessTable gm(golden(), 16);
  ClosureVerdict v = closure_meets_K(gm);
  CHECK(v.kind == ClosureVerdict::Kind::Disjoint);
  CHECK(v.gap == Dyadic::pow2_neg(2));
  CHECK(v.depth == 2);

  SubshiftSpec even = SubshiftSpec::even_shift();
  WitnessTable te(even, 16);
  ClosureVerdict ve = closure_meets_K(te);
  REQUIRE(ve.kind == ClosureVerdict::Kind::Meets);
  CHECK(*ve.witness == Point(Word{0}, Word{1}));

  SubshiftSpec allow0 = SubshiftSpec::symbol_rule({0});
  WitnessTable ta(allow0, 16);
  ClosureVerdict va = closure_meets_K(ta);
  CHECK(va.kind == ClosureVerdict::Kind::Disjoint);
  CHECK(va.gap == Dyadic::one());

  SubshiftSpec full = SubshiftSpec::finite_forbidden(2, {});
  WitnessTable tf(full, 16);
  CHECK(closure_meets_K(tf).kind == ClosureVerdict::Kind::Disjoint);

  SubshiftSpec fam = SubshiftSpec::disjoint_families({Word{1, 1}});
  WitnessTable tfam(fam, 8);
  CHECK(closure_meets_K(tfam).kind == ClosureVerdict::Kind::Unknown);
}

TEST_CASE("exit_set_closed fixtures") {
  WitnessTable gm(golden(), 16);
  CHECK(exit_set_closed(gm).kind == ClosedVerdict::Kind::Closed);

  WitnessTable te(SubshiftSpec::even_shift(), 16);
  ClosedVerdict ve = exit_set_closed(te);
  REQUIRE(ve.kind == ClosedVerdict::Kind::NotClosed);
  CHECK(*ve.witness == Point(Word{0}, Word{1}));

  WitnessTable tf(SubshiftSpec::finite_forbidden(2, {}), 16);
  CHECK(exit_set_closed(tf).kind == ClosedVerdict::Kind::Closed);
}

TEST_CASE("finite-forbidden specs are always closed and disjoint") {
  // also symbol rules with overlays (the infinite-alphabet extension)
  std::vector<SubshiftSpec> specs = {
      golden(),
      SubshiftSpec::finite_forbidden(3, {Word{0, 2}, Word{1, 1, 0}}),
      SubshiftSpec::finite_forbidden(2, {Word{0, 0, 0}}),
      SubshiftSpec::symbol_rule({0, 1}, {Word{1, 1}}),
      SubshiftSpec::symbol_rule({0, 1, 2}, {Word{0, 1}, Word{2, 2}}),
  };
  for (const auto& spec : specs) {
    WitnessTable t(spec, 16);
    ClosureVerdict v = closure_meets_K(t);
    CHECK(v.kind == ClosureVerdict::Kind::Disjoint);
    CHECK(exit_set_closed(t).kind == ClosedVerdict::Kind::Closed);
    std::size_t M = std::max<std::size_t>(spec.max_forbidden_len(), 1);
    CHECK(v.gap.to_rational() >= pow2(-(long)M));
  }
}

TEST_CASE("enumerate_exit_points produces verified exits") {
  for (auto spec : {golden(), SubshiftSpec::even_shift(),
                    SubshiftSpec::finite_forbidden(3, {Word{0, 2}, Word{1, 1, 0}})}) {
    auto exits = enumerate_exit_points(spec, 8, 8);
    CHECK(!exits.empty());
    for (const Point& e : exits) {
      CHECK(!spec.contains(e));
      CHECK(spec.contains(shift(e)));
      CHECK(closure_member(spec, e));
      WitnessTable t(spec, 16);
      CHECK(distance_to_exit(t, e).is_zero());
    }
  }
  SubshiftSpec allow0 = SubshiftSpec::symbol_rule({0});
  auto exits = enumerate_exit_points(allow0, 5, 8);
  CHECK(exits.size() == 5);
  SubshiftSpec fam = SubshiftSpec::disjoint_families({Word{1, 1}});
  for (const Point& e : enumerate_exit_points(fam, 4, 8)) {
    CHECK(!fam.contains(e));
    CHECK(fam.contains(shift(e)));
  }
}

TEST_CASE("closure membership via witness chains") {
  // every closure member has all suffixes witnessing; every non-member
  // fails at the reported depth
  std::mt19937_64 rng(91);
  for (auto spec : {golden(), SubshiftSpec::even_shift()}) {
    for (int i = 0; i < 100; ++i) {
      std::vector<Symbol> p(1 + rng() % 3), tr(rng() % 4);
      for (auto& s : p) s = rng() % 2;
      for (auto& s : tr) s = rng() % 2;
      Point x(Word{std::move(p)}, Word{std::move(tr)});
      auto k = max_witness_depth(spec, x);
      if (k) {
        for (std::size_t m = 1; m <= *k; ++m)
          CHECK(is_exit_witness(spec, point_suffix(x, m)));
        CHECK(!is_exit_witness(spec, point_suffix(x, *k + 1)));
        CHECK(!closure_member(spec, x));
      } else {
        CHECK(closure_member(spec, x));
        for (std::size_t m = 1; m <= 12; ++m)
          CHECK(is_exit_witness(spec, point_suffix(x, m)));
      }
    }
  }
}
