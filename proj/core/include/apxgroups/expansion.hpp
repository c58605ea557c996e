#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "apxgroups/element_set.hpp"
#include "apxgroups/subgroup.hpp"

namespace apx {

struct ExpansionReport {
  std::size_t a_size = 0;
  std::size_t ax_size = 0;
  Rational ratio;  // exact |AX| / |A|
  std::string test_set_source;
};

/// Exact expansion ratio |A*X| / |A|. A must be nonempty.
ExpansionReport expansion_ratio(const ElementSet& a, const ElementSet& x,
                                std::string test_set_source = "");

/// True iff |A*X| >= (5/4)|A|, compared exactly. Requires identity in X.
bool check_von_neumann(const ElementSet& a, const ElementSet& x);

/// Smallest k >= 1 with (1+epsilon)^k >= K^4, by exact rational powering.
/// Requires epsilon > 0 and K > 1.
int nesting_level_count(const Rational& epsilon, const Rational& k_bound);

struct NestingResult {
  int j = -1;
  int k = 0;
  int m = 0;
  Rational epsilon;
  ElementSet a_prime;            // A * B^(jm)
  std::size_t a_prime_size = 0;
  std::size_t expanded_size = 0;  // |A' * B^m|
  Rational expansion;             // exact |A'B^m| / |A'|
  bool core_in_a4 = false;        // the stronger containment B in A^4, reported
  bool core_power_in_a4 = false;  // the precondition B^(km) in A^4
  bool certified = false;
};

/// Finds the smallest level j < k with |A B^((j+1)m)| <= (1+eps)|A B^(jm)|.
/// Preconditions (violations throw InputError naming the exact inequality):
/// B symmetric with identity; B^(km) within A^4; |A^5| <= K^4 |A|.
/// A level always exists under the preconditions; if the scan falls off the
/// end that is a bug and a VerifyError is thrown.
NestingResult pigeonhole_nesting(const ElementSet& a, const ElementSet& b, int m,
                                 const Rational& epsilon, const Rational& k_bound);

/// Deterministic, seeded generator of finite test subsets.
/// Specs: "balls:R" | "intervals:N" | "random:r:maxsize" |
/// "random-symmetric:r:maxsize" | "coset-unions:<oracle>:r:count".
class SetSampler {
 public:
  static SetSampler parse(const ContextPtr& ctx, const std::string& spec,
                          std::uint64_t seed);

  ElementSet sample(std::size_t trial) const;
  const std::string& spec() const { return spec_; }
  std::uint64_t seed() const { return seed_; }

 private:
  SetSampler(ContextPtr ctx, std::string spec, std::uint64_t seed)
      : ctx_(std::move(ctx)), spec_(std::move(spec)), seed_(seed) {}

  enum class Kind { Balls, Intervals, Random, RandomSymmetric, CosetUnions };
  ContextPtr ctx_;
  std::string spec_;
  std::uint64_t seed_ = 0;
  Kind kind_ = Kind::Balls;
  int radius_ = 1;
  std::size_t max_size_ = 1;
  int count_ = 1;
  std::optional<SubgroupOracle> oracle_;
  std::vector<ElementSet> base_balls_;  // precomputed pools
};

/// min over sampled A of |A*X|/|A| - 1: an empirical upper bound for the
/// expansion constant of X. Never a certificate of anything.
Rational kappa_probe(const ContextPtr& ctx, const ElementSet& x,
                     const SetSampler& sampler, int trials);

/// Bounded search for a symmetric core B containing the identity with
/// B^(km) within A^4, preferring larger |B|. Candidates: power intervals of
/// cyclic subgroups, oracle intersections, and norm-pruned symmetric subsets
/// of A^2. `candidate_budget` caps how many candidates are examined.
/// Returns nullopt only if even {identity} fails (identity outside A^4).
std::optional<ElementSet> sanders_core_search(const ElementSet& a, int m, int k,
                                              std::size_t candidate_budget = 10000);

}  // namespace apx
