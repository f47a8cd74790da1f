#include <doctest.h>

#include <random>

#include "gshift/gfun.hpp"

using namespace gshift;

namespace {

SubshiftSpec golden() { return SubshiftSpec::finite_forbidden(2, {Word{1, 1}}); }

Rational exact_eval(const GFunction& g, const Point& x) {
  RatInterval v = g.eval(x, Rational(1, 1 << 20));
  REQUIRE(v.is_exact());
  return v.lo;
}

}  // namespace

TEST_CASE("weight sequences") {
  WeightSeq u = WeightSeq::uniform(2);
  CHECK(u.lambda(0) == Rational(1, 2));
  CHECK(u.tail_mass(1) == 0);
  CHECK_THROWS_AS(u.lambda(2), InvalidUsage);

  WeightSeq geo = WeightSeq::geometric(Rational(1, 2));
  Rational sum = 0;
  for (Symbol a = 0; a <= 20; ++a) sum += geo.lambda(a);
  CHECK(sum + geo.tail_mass(20) == 1);  // geometric tail identity
  CHECK(geo.tail_mass(20) == pow2(-21));
  // strided masses partition the tail
  Rational strided = 0;
  for (Symbol o = 0; o < 3; ++o) {
    Symbol first = 21 + (o + 3 - 21 % 3) % 3;
    strided += geo.strided_mass(first, 3);
  }
  CHECK(strided == geo.tail_mass(20));
}

TEST_CASE("certificates: fixtures") {
  WitnessTable gm(golden(), 16);
  CertifyResult c = certify_property_g(gm, 8, 32);
  REQUIRE(c.kind == CertifyResult::Kind::Certified);
  CHECK(c.cert->m == 2);
  REQUIRE(c.cert->escape.size() == 1);
  CHECK(c.cert->escape.at(Word{1}) == 0);  // class "1" escapes via 0

  WitnessTable even(SubshiftSpec::even_shift(), 20);
  CertifyResult ce = certify_property_g(even, 8, 32);
  REQUIRE(ce.kind == CertifyResult::Kind::Certified);
  CHECK(ce.cert->m == 2);
  REQUIRE(ce.cert->escape.size() == 1);
  CHECK(ce.cert->escape.at(Word{0}) == 0);  // class "0" escapes via 0

  WitnessTable full(SubshiftSpec::finite_forbidden(2, {}), 16);
  CertifyResult cf = certify_property_g(full, 8, 32);
  REQUIRE(cf.kind == CertifyResult::Kind::Certified);
  CHECK(cf.cert->m == 1);
  CHECK(cf.cert->escape.empty());

  WitnessTable allow0(SubshiftSpec::symbol_rule({0}), 16);
  CertifyResult ca = certify_property_g(allow0, 8, 32);
  REQUIRE(ca.kind == CertifyResult::Kind::Certified);
  CHECK(ca.cert->m == 1);
  REQUIRE(ca.cert->escape.size() == 1);
  CHECK(ca.cert->escape.at(Word{}) == 0);

  WitnessTable fam(SubshiftSpec::disjoint_families({Word{1, 1}}), 16);
  CertifyResult cq = certify_property_g(fam, 8, 32);
  REQUIRE(cq.kind == CertifyResult::Kind::Certified);
  CHECK(cq.cert->m == 1);
  CHECK(cq.cert->escape.at(Word{}) == 0);  // offset 0 ends no expanded word
}

TEST_CASE("certificates: property G refuted") {
  SubshiftSpec spec = SubshiftSpec::finite_forbidden(2, {Word{1, 0, 0}, Word{1, 0, 1}});
  WitnessTable t(spec, 16);
  CertifyResult c = certify_property_g(t, 6, 32);
  REQUIRE(c.kind == CertifyResult::Kind::Refuted);
  // every extension of the refutation point lands in closure(E_K)
  for (Symbol a = 0; a < 2; ++a) CHECK(closure_member(spec, append(*c.refutation, a)));
}

TEST_CASE("certificates ignore weights") {
  // E_m membership is weight-independent, so certificates are too: the
  // same table certifies identically regardless of the weights used later.
  WitnessTable even(SubshiftSpec::even_shift(), 20);
  CertifyResult a = certify_property_g(even, 8, 32);
  CertifyResult b = certify_property_g(even, 8, 16);
  REQUIRE(a.kind == CertifyResult::Kind::Certified);
  REQUIRE(b.kind == CertifyResult::Kind::Certified);
  CHECK(a.cert->m == b.cert->m);
  CHECK(a.cert->escape == b.cert->escape);
}

TEST_CASE("krieger reciprocal on the golden mean") {
  SubshiftSpec gm = golden();
  WitnessTable t(gm, 16);
  REQUIRE(certify_property_g(t, 8, 32).kind == CertifyResult::Kind::Certified);
  GFunction g = GFunction::krieger(t);

  // x in K ending 1: the 0-extension is forced, the 1-extension is dead
  for (Point x : {Point(Word{0}, Word{1}), Point(Word{0, 1}), Point(Word{0, 0, 1})}) {
    REQUIRE(gm.contains(x));
    REQUIRE(x.at(0) == 1);
    CHECK(exact_eval(g, append(x, 0)) == 1);
    CHECK(exact_eval(g, append(x, 1)) == 0);
  }
  // x ending 0: both extensions weigh 1/2
  for (Point x : {Point(Word{0}), Point(Word{0}, Word{1, 0})}) {
    CHECK(exact_eval(g, append(x, 0)) == Rational(1, 2));
    CHECK(exact_eval(g, append(x, 1)) == Rational(1, 2));
  }
}

TEST_CASE("krieger on the full shift is uniform") {
  SubshiftSpec full = SubshiftSpec::finite_forbidden(2, {});
  WitnessTable t(full, 16);
  GFunction g = GFunction::krieger(t);
  for (Point x : {Point(Word{0}), Point(Word{1}, Word{0})})
    for (Symbol a = 0; a < 2; ++a) CHECK(exact_eval(g, append(x, a)) == Rational(1, 2));
}

TEST_CASE("krieger requires a finite alphabet") {
  SubshiftSpec allow0 = SubshiftSpec::symbol_rule({0});
  WitnessTable t(allow0, 16);
  CHECK_THROWS_AS(GFunction::krieger(t), InvalidUsage);
}

TEST_CASE("weighted construction on the even shift") {
  SubshiftSpec even = SubshiftSpec::even_shift();
  WitnessTable t(even, 20);
  CertifyResult c = certify_property_g(t, 8, 32);
  REQUIRE(c.kind == CertifyResult::Kind::Certified);
  GFunction g = GFunction::weighted(t, *c.cert, WeightSeq::uniform(2));

  Point zeros(Word{0});
  Point limit(Word{0}, Word{1});
  CHECK(exact_eval(g, limit) == 0);   // lambda_1 * rho = 0
  CHECK(exact_eval(g, zeros) == 1);   // 1 - lambda_1 * 0
  CHECK(exact_eval(g, append(zeros, 0)) + exact_eval(g, append(zeros, 1)) == 1);

  // baseline region: class "1" is not a witness prefix
  Point ones(Word{1});
  CHECK(exact_eval(g, append(ones, 1)) == Rational(1, 2));
}

TEST_CASE("weighted construction on a single allowed symbol") {
  SubshiftSpec allow0 = SubshiftSpec::symbol_rule({0});
  WitnessTable t(allow0, 16);
  CertifyResult c = certify_property_g(t, 8, 32);
  REQUIRE(c.kind == CertifyResult::Kind::Certified);
  GFunction g = GFunction::weighted(t, *c.cert, WeightSeq::geometric(Rational(1, 2)));

  Point zeros(Word{0});
  CHECK(exact_eval(g, zeros) == 1);
  for (Symbol a = 1; a <= 32; ++a) CHECK(exact_eval(g, append(zeros, a)) == 0);

  // truncated evaluation still encloses the exact value, with the tail
  // bounded by the geometric identity
  RatInterval tr = g.eval_truncated(zeros, 20);
  CHECK(tr.contains(1));
  CHECK(tr.width() <= pow2(-20));
  CHECK(tr.width() == pow2(-21));
}

TEST_CASE("weighted construction on disjoint families") {
  SubshiftSpec fam = SubshiftSpec::disjoint_families({Word{1, 1}});
  WitnessTable t(fam, 16);
  CertifyResult c = certify_property_g(t, 8, 32);
  REQUIRE(c.kind == CertifyResult::Kind::Certified);
  GFunction g = GFunction::weighted(t, *c.cert, WeightSeq::geometric(Rational(1, 2)));
  // sums over extensions stay exactly 1 despite the countable support
  for (Point x : {Point(Word{1, 0}), Point(Word{3, 0}), Point(Word{0})}) {
    RatInterval s = g.sum_over_preimages(x, Rational(1, 1 << 20));
    CHECK(s.is_exact());
    CHECK(s.lo == 1);
  }
  // exit points get exactly zero
  for (const Point& e : enumerate_exit_points(fam, 4, 8)) CHECK(exact_eval(g, e) == 0);
}

TEST_CASE("baseline region evaluates to the weight") {
  SubshiftSpec gm = golden();
  WitnessTable t(gm, 16);
  CertifyResult c = certify_property_g(t, 8, 32);
  GFunction g = GFunction::weighted(t, *c.cert, WeightSeq::uniform(2));
  // class "0" is not a witness prefix for the golden mean at m=2
  Point x(Word{0});
  CHECK(exact_eval(g, append(x, 0)) == Rational(1, 2));
  CHECK(exact_eval(g, append(x, 1)) == Rational(1, 2));
}

TEST_CASE("verify_sum_one across variants") {
  const Rational eps(1, 1 << 20);
  SubshiftSpec gm = golden();
  WitnessTable t(gm, 16);
  CertifyResult c = certify_property_g(t, 8, 32);

  GFunction kg = GFunction::krieger(t);
  CHECK(verify_sum_one(kg, sample_points(gm, 200, 42, 8), eps, 8).pass);

  GFunction wg = GFunction::weighted(t, *c.cert, WeightSeq::uniform(2));
  CHECK(verify_sum_one(wg, sample_points(gm, 200, 43, 8), eps, 8).pass);

  SubshiftSpec even = SubshiftSpec::even_shift();
  WitnessTable te(even, 20);
  CertifyResult ce = certify_property_g(te, 8, 32);
  GFunction we = GFunction::weighted(te, *ce.cert, WeightSeq::uniform(2));
  CHECK(verify_sum_one(we, sample_points(even, 200, 44, 8), eps, 8).pass);

  SubshiftSpec allow0 = SubshiftSpec::symbol_rule({0});
  WitnessTable ta(allow0, 16);
  CertifyResult ca = certify_property_g(ta, 8, 32);
  GFunction wa = GFunction::weighted(ta, *ca.cert, WeightSeq::geometric(Rational(1, 3)));
  CHECK(verify_sum_one(wa, sample_points(allow0, 100, 45, 6), eps, 6).pass);

  SubshiftSpec fam = SubshiftSpec::disjoint_families({Word{1, 1}, Word{2}});
  WitnessTable tf(fam, 16);
  CertifyResult cf = certify_property_g(tf, 8, 32);
  REQUIRE(cf.kind == CertifyResult::Kind::Certified);
  GFunction wf = GFunction::weighted(tf, *cf.cert, WeightSeq::geometric(Rational(1, 2)));
  CHECK(verify_sum_one(wf, sample_points(fam, 60, 46, 6), eps, 6).pass);
}

TEST_CASE("verify_invariance") {
  SubshiftSpec gm = golden();
  WitnessTable t(gm, 16);
  CertifyResult c = certify_property_g(t, 8, 32);
  CHECK(verify_invariance(GFunction::krieger(t), 16, 8).pass);
  CHECK(verify_invariance(GFunction::weighted(t, *c.cert, WeightSeq::uniform(2)), 16, 8).pass);
  // the baseline weights are not invariant: some exit gets positive mass
  CHECK(!verify_invariance(GFunction::baseline(t, WeightSeq::uniform(2)), 16, 8).pass);

  SubshiftSpec even = SubshiftSpec::even_shift();
  WitnessTable te(even, 20);
  CertifyResult ce = certify_property_g(te, 8, 32);
  CHECK(verify_invariance(GFunction::weighted(te, *ce.cert, WeightSeq::uniform(2)), 16, 8).pass);

  SubshiftSpec full = SubshiftSpec::finite_forbidden(2, {});
  WitnessTable tf(full, 16);
  CHECK(verify_invariance(GFunction::baseline(tf, WeightSeq::uniform(2)), 16, 8).pass);
}

TEST_CASE("krieger and weighted share the zero set on exits") {
  SubshiftSpec gm = golden();
  WitnessTable t(gm, 16);
  CertifyResult c = certify_property_g(t, 8, 32);
  GFunction kg = GFunction::krieger(t);
  GFunction wg = GFunction::weighted(t, *c.cert, WeightSeq::uniform(2));
  for (const Point& e : enumerate_exit_points(gm, 8, 8)) {
    CHECK(exact_eval(kg, e) == 0);
    CHECK(exact_eval(wg, e) == 0);
  }
}

TEST_CASE("verify_strict") {
  SubshiftSpec even = SubshiftSpec::even_shift();
  WitnessTable te(even, 20);
  CertifyResult ce = certify_property_g(te, 8, 32);
  GFunction we = GFunction::weighted(te, *ce.cert, WeightSeq::uniform(2));
  CHECK(verify_strict(we, 16, 8).pass);
  CHECK_THROWS_AS(verify_strict(GFunction::krieger(te), 8, 8), InvalidUsage);

  SubshiftSpec gm = golden();
  WitnessTable t(gm, 16);
  CertifyResult c = certify_property_g(t, 8, 32);
  CHECK(verify_strict(GFunction::weighted(t, *c.cert, WeightSeq::uniform(2)), 16, 8).pass);
}

TEST_CASE("verify_strictly_positive") {
  SubshiftSpec gm = golden();
  WitnessTable t(gm, 16);
  CertifyResult c = certify_property_g(t, 8, 32);
  GFunction wg = GFunction::weighted(t, *c.cert, WeightSeq::uniform(2));
  CHECK(verify_strictly_positive(wg, 16, 8).verdict == PositiveVerdict::Holds);

  SubshiftSpec even = SubshiftSpec::even_shift();
  WitnessTable te(even, 20);
  CertifyResult ce = certify_property_g(te, 8, 32);
  GFunction we = GFunction::weighted(te, *ce.cert, WeightSeq::uniform(2));
  PositiveReport pe = verify_strictly_positive(we, 16, 8);
  REQUIRE(pe.verdict == PositiveVerdict::NotApplicable);
  CHECK(*pe.witness == Point(Word{0}, Word{1}));

  SubshiftSpec allow0 = SubshiftSpec::symbol_rule({0});
  WitnessTable ta(allow0, 16);
  CertifyResult ca = certify_property_g(ta, 8, 32);
  GFunction wa = GFunction::weighted(ta, *ca.cert, WeightSeq::geometric(Rational(1, 2)));
  CHECK(verify_strictly_positive(wa, 16, 8).verdict == PositiveVerdict::Holds);
}

TEST_CASE("continuity modulus of the weighted construction") {
  // rho(x,y) <= 2^-(m+j) forces |g(x)-g(y)| <= 2^{-j+1}
  std::mt19937_64 rng(77);
  SubshiftSpec even = SubshiftSpec::even_shift();
  WitnessTable te(even, 20);
  CertifyResult ce = certify_property_g(te, 8, 32);
  GFunction g = GFunction::weighted(te, *ce.cert, WeightSeq::uniform(2));
  std::size_t m = ce.cert->m;
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t j = 1 + rng() % 5;
    std::vector<Symbol> suffix(m + j);
    for (auto& s : suffix) s = rng() % 2;
    std::vector<Symbol> pa(1 + rng() % 2), pb(1 + rng() % 2);
    for (auto& s : pa) s = rng() % 2;
    for (auto& s : pb) s = rng() % 2;
    Point x(Word{std::move(pa)}, Word{std::vector<Symbol>(suffix)});
    Point y(Word{std::move(pb)}, Word{std::vector<Symbol>(suffix)});
    if (metric(x, y).to_rational() > pow2(-(long)(m + j))) continue;
    Rational gx = exact_eval(g, x), gy = exact_eval(g, y);
    Rational diff = gx > gy ? gx - gy : gy - gx;
    CHECK(diff <= pow2(-(long)j + 1));
  }
}
