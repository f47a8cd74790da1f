#ifndef GSHIFT_SIM_HPP
#define GSHIFT_SIM_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gshift/gfun.hpp"

namespace gshift {

// Uniform draw from [0,1) with exact comparisons against rationals: the
// realized value is a lazy binary expansion, refined until a comparison
// separates.  Algorithm identifier: mt19937_64.
class ExactRng {
 public:
  explicit ExactRng(std::uint64_t seed) : gen_(seed) {}

  class Draw {
   public:
    explicit Draw(std::mt19937_64& gen) : gen_(&gen) {}
    // -1 when u < r, +1 when u > r; refines until strict (almost surely
    // finite).
    int compare(const Rational& r);

   private:
    void refine();
    std::mt19937_64* gen_;
    BigInt num_ = 0;
    unsigned bits_ = 0;
  };

  Draw draw() { return Draw(gen_); }

 private:
  std::mt19937_64 gen_;
};

struct Trajectory {
  Point initial{Word{Symbol(0)}};
  std::uint64_t seed = 0;
  std::vector<Symbol> symbols;  // appended per step
  std::vector<char> in_k;       // membership after each step
  std::optional<std::size_t> first_exit;  // 1-based step of the first exit

  // One line per step: `t <symbol> <inK:0|1>`.
  std::string dump() const;
};

// One Gundy-process step from x: samples a with probability
// g((x,a)) by inverse CDF over exact enclosures.
std::pair<Symbol, Point> step(const GFunction& g, const Point& x, ExactRng& rng,
                              const Rational& eps);

// T steps from x0 (which must lie in K), recording membership and the
// first exit.
Trajectory run(const GFunction& g, const Point& x0, std::size_t steps, std::uint64_t seed);

struct SimReport {
  std::size_t runs = 0;
  std::size_t steps = 0;
  std::size_t exit_count = 0;  // runs that exited
  std::vector<std::optional<std::size_t>> first_exits;  // by run index
  bool invariant = false;

  std::string summary() const;
};

// `runs` independent trajectories (seeds seed, seed+1, ...), merged by
// run index.  Invariant means zero exits anywhere.
SimReport empirical_invariance(const GFunction& g, const Point& x0, std::size_t steps,
                               std::size_t runs, std::uint64_t seed);

}  // namespace gshift

#endif
