#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gshift/exitset.hpp"
#include "gshift/gfun.hpp"
#include "gshift/sim.hpp"
#include "gshift/subshift.hpp"

namespace {

using namespace gshift;

struct Options {
  std::string spec_path;
  std::string variant = "weighted";
  std::size_t depth = 16;
  std::size_t mmax = 8;
  std::string eps = "1/1048576";
  Symbol horizon = 32;
  std::size_t steps = 10000;
  std::size_t runs = 1;
  std::uint64_t seed = 0;
  std::string out_path;
};

void emit(const Options& opt, const std::string& text) {
  if (opt.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.out_path);
  if (!out) throw InvalidUsage("cannot open output file: " + opt.out_path);
  out << text;
  std::cout << "wrote " << opt.out_path << "\n";
}

std::string closure_line(const WitnessTable& table) {
  std::ostringstream out;
  ClosureVerdict cv = closure_meets_K(table);
  switch (cv.kind) {
    case ClosureVerdict::Kind::Disjoint:
      out << "closure_meets_K: disjoint gap=" << cv.gap.str() << " depth=" << cv.depth;
      break;
    case ClosureVerdict::Kind::Meets:
      out << "closure_meets_K: meets witness=" << cv.witness->str();
      break;
    case ClosureVerdict::Kind::Unknown:
      out << "closure_meets_K: unknown depth=" << cv.depth;
      break;
  }
  out << '\n';
  ClosedVerdict cl = exit_set_closed(table);
  switch (cl.kind) {
    case ClosedVerdict::Kind::Closed:
      out << "exit_set_closed: closed";
      break;
    case ClosedVerdict::Kind::NotClosed:
      out << "exit_set_closed: not-closed witness=" << cl.witness->str();
      break;
    case ClosedVerdict::Kind::Unknown:
      out << "exit_set_closed: unknown depth=" << cl.depth;
      break;
  }
  out << '\n';
  return out.str();
}

int cmd_check(const Options& opt) {
  SubshiftSpec spec = SubshiftSpec::parse_file(opt.spec_path);
  std::ostringstream out;
  out << "spec: " << spec.describe() << '\n';
  out << "declared_finite_type: " << (spec.is_declared_finite_type() ? "yes" : "no") << '\n';
  out << "suffix_language_sizes:";
  std::size_t cap = spec.countable_alphabet() ? std::min<std::size_t>(opt.depth, 6) : opt.depth;
  Symbol h = spec.countable_alphabet() ? std::min<Symbol>(opt.horizon, 6) : opt.horizon;
  for (std::size_t n = 1; n <= cap; ++n) out << ' ' << n << ':' << spec.suffix_count(n, h);
  if (spec.countable_alphabet()) out << " (symbols<=" << h << ")";
  out << '\n';
  WitnessTable table(spec, opt.depth);
  out << closure_line(table);
  emit(opt, out.str());
  return 0;
}

int cmd_exitset(const Options& opt) {
  SubshiftSpec spec = SubshiftSpec::parse_file(opt.spec_path);
  WitnessTable table(spec, opt.depth);
  std::ostringstream out;
  for (std::size_t m = 1; m <= opt.mmax; ++m) {
    const char* status = table.status(m) == CertStatus::Exact ? "exact" : "depth-bounded";
    for (const Word& w : table.witnesses(m, opt.horizon))
      out << m << '\t' << w.str() << '\t' << status << '\n';
  }
  emit(opt, out.str());
  return 0;
}

int cmd_build(const Options& opt) {
  SubshiftSpec spec = SubshiftSpec::parse_file(opt.spec_path);
  WitnessTable table(spec, opt.depth);
  Rational eps = parse_rational(opt.eps);
  std::ostringstream out;

  CertifyResult cr = certify_property_g(table, opt.mmax, opt.horizon);
  if (cr.kind == CertifyResult::Kind::Refuted) {
    out << "property_g: refuted at " << cr.refutation->str() << '\n';
    emit(opt, out.str());
    return 1;
  }
  if (cr.kind == CertifyResult::Kind::Unknown) {
    out << "property_g: unknown (no certificate up to m=" << opt.mmax << ")\n";
    emit(opt, out.str());
    return 1;
  }
  out << "certificate " << cr.cert->str() << '\n';

  GFunction g = opt.variant == "krieger"
                    ? GFunction::krieger(table)
                    : GFunction::weighted(table, *cr.cert, weights_for(spec));
  out << "variant: " << g.variant_name() << '\n';
  out << "weights: " << g.weights().str() << '\n';

  bool ok = true;
  Report sum = verify_sum_one(g, sample_points(spec, 64, 7, opt.horizon), eps, opt.horizon);
  ok = ok && sum.pass;
  out << sum.tsv();
  Report inv = verify_invariance(g, 32, std::min<Symbol>(opt.horizon, 8));
  ok = ok && inv.pass;
  out << inv.tsv();
  if (g.variant() == GFunction::Variant::WeightedDistance) {
    Report st = verify_strict(g, 24, std::min<Symbol>(opt.horizon, 8));
    ok = ok && st.pass;
    out << st.tsv();
  }
  PositiveReport pos = verify_strictly_positive(g, 24, std::min<Symbol>(opt.horizon, 8));
  ok = ok && pos.details.pass;
  out << pos.details.tsv();
  out << "strictly_positive: " << pos.verdict_name();
  if (pos.witness) out << " (" << pos.witness->str() << ")";
  out << '\n';

  if (g.variant() == GFunction::Variant::KriegerReciprocal) {
    // Representative values on depth-2 suffix classes.
    for (const Word& u : spec.suffix_language(2)) {
      if (auto x = spec.point_ending(u)) {
        RatInterval v = g.eval(*x, eps);
        out << "g\t" << u.str() << '\t' << v.lo << '\n';
      }
    }
  }
  out << "result: " << (ok ? "pass" : "FAIL") << '\n';
  emit(opt, out.str());
  return ok ? 0 : 1;
}

int cmd_simulate(const Options& opt) {
  SubshiftSpec spec = SubshiftSpec::parse_file(opt.spec_path);
  WitnessTable table(spec, opt.depth);
  CertifyResult cr = certify_property_g(table, opt.mmax, opt.horizon);
  if (cr.kind != CertifyResult::Kind::Certified) {
    std::cerr << "no property-G certificate; cannot build g\n";
    return 1;
  }
  GFunction g = opt.variant == "krieger"
                    ? GFunction::krieger(table)
                    : GFunction::weighted(table, *cr.cert, weights_for(spec));

  auto sl1 = spec.suffix_language(1, std::min<Symbol>(opt.horizon, 8));
  if (sl1.empty()) throw InvalidUsage("empty suffix language");
  Point x0 = *spec.point_ending(sl1.front());

  SimReport rep = empirical_invariance(g, x0, opt.steps, opt.runs, opt.seed);
  std::ostringstream out;
  out << "initial: " << x0.str() << '\n';
  out << "variant: " << g.variant_name() << '\n';
  out << rep.summary();
  std::cout << out.str();
  if (!opt.out_path.empty()) {
    Trajectory t = run(g, x0, opt.steps, opt.seed);
    std::ofstream f(opt.out_path);
    if (!f) throw InvalidUsage("cannot open output file: " + opt.out_path);
    f << t.dump();
    std::cout << "wrote " << opt.out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"construct and verify g-functions for one-sided subshifts"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--spec", opt.spec_path, "spec file")->required();
    sub->add_option("--depth", opt.depth, "probe depth N");
    sub->add_option("--horizon", opt.horizon, "symbol horizon for countable alphabets");
    sub->add_option("--out", opt.out_path, "write the report here");
  };

  CLI::App* check = app.add_subcommand("check", "normalize and run the topological checks");
  add_common(check);

  CLI::App* build = app.add_subcommand("build", "certify property G and verify a g-function");
  add_common(build);
  build->add_option("--variant", opt.variant, "krieger|weighted")
      ->check(CLI::IsMember({"krieger", "weighted"}));
  build->add_option("--mmax", opt.mmax, "certificate search depth");
  build->add_option("--eps", opt.eps, "enclosure tolerance p/q");

  CLI::App* sim = app.add_subcommand("simulate", "run the Markov process driven by g");
  add_common(sim);
  sim->add_option("--variant", opt.variant, "krieger|weighted")
      ->check(CLI::IsMember({"krieger", "weighted"}));
  sim->add_option("--mmax", opt.mmax, "certificate search depth");
  sim->add_option("--eps", opt.eps, "enclosure tolerance p/q");
  sim->add_option("--steps", opt.steps, "steps per run");
  sim->add_option("--runs", opt.runs, "independent runs");
  sim->add_option("--seed", opt.seed, "rng seed (default 0)");

  CLI::App* exitset = app.add_subcommand("exitset", "dump the witness table as TSV");
  add_common(exitset);
  exitset->add_option("--mmax", opt.mmax, "largest witness depth to dump");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (opt.depth < opt.mmax + 1)
      throw InvalidUsage("--depth must be at least --mmax + 1");
    if (check->parsed()) return cmd_check(opt);
    if (build->parsed()) return cmd_build(opt);
    if (sim->parsed()) return cmd_simulate(opt);
    if (exitset->parsed()) return cmd_exitset(opt);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const EmptySubshift& e) {
    std::cerr << "empty subshift: " << e.what() << "\n";
    return 2;
  } catch (const InvalidUsage& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
