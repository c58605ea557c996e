#pragma once

#include <string>
#include <vector>

#include "apxgroups/element_set.hpp"

namespace apx {

/// Decidable membership predicate for a named built-in subgroup. Oracles are
/// first-class values: they parse from a spec string, serialize back to it,
/// and are what experiments pass wherever a subgroup H is required.
///
/// Built-ins (family in parentheses):
///   all                      whole group (any family)
///   even-length              words of even length (free)
///   even-lattice:m           all coordinates divisible by m (abelian)
///   sublattice:m1,...,md     coordinate-wise congruence lattice (abelian)
///   upper-triangular         zero entries below the diagonal (matrix)
///   det-one                  determinant 1 (matrix)
///   center                   (0, 0, z) triples (heisenberg)
///   congruence:m             all three coordinates divisible by m (heisenberg)
///   table-subgroup:i1,i2,... explicit subset, validated as a subgroup (table)
class SubgroupOracle {
 public:
  /// Parses a spec string and checks it is meaningful for `ctx`.
  static SubgroupOracle parse(const ContextPtr& ctx, const std::string& spec);
  /// Whole-group oracle.
  static SubgroupOracle whole_group(const ContextPtr& ctx);

  bool contains(const Element& e) const;
  const std::string& spec() const { return spec_; }
  const ContextPtr& context() const { return ctx_; }

 private:
  enum class Kind {
    All,
    EvenLength,
    EvenLattice,
    Sublattice,
    UpperTriangular,
    DetOne,
    Center,
    Congruence,
    TableSubgroup,
  };

  SubgroupOracle(ContextPtr ctx, Kind kind, std::string spec)
      : ctx_(std::move(ctx)), kind_(kind), spec_(std::move(spec)) {}

  ContextPtr ctx_;
  Kind kind_;
  std::string spec_;
  Int modulus_ = 0;
  std::vector<Int> moduli_;
  std::vector<char> member_;  // table subgroups
};

/// {s in S : s * x^-1 in H}.
ElementSet intersect_coset(const ElementSet& s, const SubgroupOracle& h,
                           const Element& x);

}  // namespace apx
