#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "apxgroups/element_set.hpp"

namespace apx {

enum class FreenessMode { PingPong, NoRelationUpTo };

/// Either a structured ping-pong certificate (conclusive for the implemented
/// 2x2 unipotent pattern) or a no-relation-up-to-length-L record, which is a
/// falsifiable statement, never a proof of freeness.
struct FreenessCertificate {
  FreenessMode mode = FreenessMode::NoRelationUpTo;
  Element a;
  Element b;
  // PingPong: the off-diagonal entries, |t| >= 2 and |s| >= 2.
  Rational t;
  Rational s;
  // NoRelationUpTo:
  int length_bound = 0;
  std::uint64_t words_checked = 0;
};

/// The shortest nonempty reduced word in a, b (symbols 1, -1, 2, -2 meaning
/// a, a^-1, b, b^-1) that evaluates to the identity.
struct RelationCounterexample {
  Element a;
  Element b;
  std::vector<int> word;
};

/// Emits a certificate iff the pair matches, exactly, the unipotent pattern
/// a = [[1,t],[0,1]], b = [[1,0],[s,1]] with integer |t| >= 2, |s| >= 2.
/// nullopt means "not covered by the criterion", not "not free".
/// Throws InputError unless the context is a 2x2 matrix group.
std::optional<FreenessCertificate> pingpong_certify(const ContextPtr& ctx,
                                                    const Element& a,
                                                    const Element& b);

using NoRelationOutcome = std::variant<FreenessCertificate, RelationCounterexample>;

/// Enumerates every nonempty reduced word of length <= L in the pair and
/// evaluates it exactly. Returns the certificate when none is the identity,
/// else the shortest (then lexicographically least) offending word.
NoRelationOutcome no_relation_check(const ContextPtr& ctx, const Element& a,
                                    const Element& b, int length_bound);

struct FreePairResult {
  Element a;
  Element b;
  FreenessCertificate certificate;
};

/// Scans unordered pairs of distinct elements of A^m in canonical order:
/// first any ping-pong certified pair (both orientations tried), then the
/// first pair surviving no_relation_check at the given length bound.
/// nullopt is explicitly inconclusive.
std::optional<FreePairResult> free_pair_search(const ElementSet& a, int m,
                                               int length_bound);

}  // namespace apx
