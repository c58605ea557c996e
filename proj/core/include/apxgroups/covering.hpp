#pragma once

#include <optional>
#include <string>

#include "apxgroups/element_set.hpp"
#include "apxgroups/subgroup.hpp"

namespace apx {

/// Witness that a symmetric set A with identity satisfies A^2 within A*X for
/// a symmetric X with |X| <= k. `verified` is only set by an exact check.
struct ApproxWitness {
  ElementSet base;  // A
  ElementSet x;
  Rational k;
  bool verified = false;
};

/// Witness that B controls A: |B| <= k|A|, |X| <= k, A within BX and XB.
struct ControlWitness {
  ElementSet base;  // A
  ElementSet b;
  ElementSet x;
  Rational k;
};

/// Constructive covering record: X within S, the translates xT pairwise
/// disjoint, S within X*T*T^-1, |X|*|T| <= |S*T|.
struct CoverCertificate {
  ElementSet s;
  ElementSet t;
  ElementSet x;
  bool covered = false;
  bool disjointness_checked = false;
  Rational ratio_bound;  // exact |S*T|/|T|
};

/// nullopt when the check passes; otherwise the first failing condition,
/// naming the first missing element where that is the failure.
std::optional<std::string> check_approx(const ElementSet& a, const ElementSet& x,
                                        const Rational& k);

/// Exact check of the three conditions (X symmetric, |X| <= k, A^2 in AX).
/// Requires A symmetric with identity, else throws InputError.
bool verify_approx(const ElementSet& a, const ElementSet& x, const Rational& k);

std::optional<std::string> check_control(const ElementSet& a, const ControlWitness& w);
bool verify_control(const ElementSet& a, const ControlWitness& w);

std::optional<std::string> check_cover(const CoverCertificate& c);

/// Greedy witness search over a candidate pool (default A^2). Candidates are
/// added as symmetric pairs {x, x^-1}; ties in covering gain break by
/// canonical order. Returns a verified witness with |X| <= k_max, or nullopt.
/// The witness's `k` is the exact size found (an upper bound on the minimum).
std::optional<ApproxWitness> find_witness(
    const ElementSet& a, const Rational& k_max,
    const std::optional<ElementSet>& pool = std::nullopt);

/// Exhaustive minimum-size witness over the pool, for small instances.
/// Throws InputError when the pool has more than `max_pool_orbits` symmetric
/// orbits; searches sizes up to min(k_max, max_size).
std::optional<ApproxWitness> find_witness_exhaustive(
    const ElementSet& a, const Rational& k_max,
    const std::optional<ElementSet>& pool = std::nullopt,
    std::size_t max_pool_orbits = 20, std::size_t max_size = 5);

/// Greedy maximal disjoint-translate covering of S by T, in canonical order.
CoverCertificate ruzsa_cover(const ElementSet& s, const ElementSet& t);

/// Output of the subgroup-control construction on a verified approximate
/// group: B = A^2 n H, an approx witness for B at bound 2K^3, and a control
/// witness at bound 2K^(2k+4)/delta with delta = |A^k n Hx| / |A|.
struct SubgroupControlResult {
  ElementSet b;
  ApproxWitness b_witness;
  ControlWitness control;
  Rational delta;
  int k = 0;
};

/// Requires witness_a verified (checked again here). Throws InputError when
/// A^k misses the coset Hx entirely (delta = 0); throws VerifyError if any
/// constructed inclusion fails its exact check (that would be a bug).
SubgroupControlResult subgroup_control(const ElementSet& a,
                                       const ApproxWitness& witness_a,
                                       const SubgroupOracle& h, const Element& x,
                                       int k);

/// Convenience overload: runs find_witness(a, k_bound) first.
SubgroupControlResult subgroup_control(const ElementSet& a, const Rational& k_bound,
                                       const SubgroupOracle& h, const Element& x,
                                       int k);

/// S with every element inverted.
ElementSet inverse_set(const ElementSet& s);

}  // namespace apx
