#pragma once

#include <memory>
#include <string>
#include <vector>

#include "apxgroups/element.hpp"
#include "apxgroups/errors.hpp"

namespace apx {

enum class Family { Free, Abelian, Heisenberg, Matrix, Table };

class ElementSet;

/// A computable group presentation: exact multiplication, inversion,
/// identity, and a canonical form for one of the built-in families.
/// Contexts are immutable; share them by ContextPtr.
///
/// Families and payloads:
///   Free(r)       reduced words over r generators, run-length encoded
///   Abelian(d)    integer vectors of length d
///   Heisenberg    integer triples (x, y, z) with
///                 (x,y,z)(x',y',z') = (x+x', y+y', z+z'+x*y')
///   Matrix(n)     n x n invertible matrices over exact rationals
///   Table(N)      indices into a validated multiplication table, N <= 256
class GroupContext {
 public:
  static std::shared_ptr<const GroupContext> free_group(int rank);
  static std::shared_ptr<const GroupContext> free_abelian(int rank);
  static std::shared_ptr<const GroupContext> heisenberg();
  static std::shared_ptr<const GroupContext> matrix_group(int n);
  /// Validates the table as a group: closure, identity, inverses, and full
  /// associativity (N^3 triples). Throws InputError naming the first defect.
  static std::shared_ptr<const GroupContext> finite_table(
      std::vector<std::vector<int>> table);

  Family family() const { return family_; }
  int rank() const { return rank_; }           // Free/Abelian rank, Matrix n
  int table_order() const { return static_cast<int>(table_.size()); }
  const std::vector<std::vector<int>>& table() const { return table_; }

  bool same_group(const GroupContext& other) const;

  // -- element construction (canonicalizing) --------------------------------

  Element identity() const;
  /// Free: word from signed generator indices, freely reduced.
  Element word(const std::vector<int>& symbols) const;
  /// Abelian / Heisenberg: from coordinates.
  Element tuple(const std::vector<Int>& coords) const;
  /// Matrix: from row-major rational entries; must be invertible.
  Element matrix(std::vector<Rational> entries) const;
  /// Table: from an index in [0, N).
  Element table_element(int index) const;

  // -- group operations ------------------------------------------------------

  Element mul(const Element& x, const Element& y) const;
  Element inv(const Element& x) const;
  bool is_identity(const Element& x) const;

  /// Canonical total order used for every deterministic tie-break and for
  /// the on-disk ordering of sets.
  int compare(const Element& a, const Element& b) const;
  bool less(const Element& a, const Element& b) const { return compare(a, b) < 0; }

  /// Checks a payload is well-formed for this family (rank, index range,
  /// canonical form). Throws InputError if not.
  void validate(const Element& x) const;

  /// Standard symmetric generating set including the identity:
  /// Free/Abelian: identity plus each generator and its inverse;
  /// Heisenberg: identity, (+-1,0,0), (0,+-1,0);
  /// Matrix/Table: not defined here (supply generators explicitly).
  std::vector<Element> standard_generators() const;

  /// Short human-readable spec, e.g. "free:2".
  std::string describe() const;

 private:
  GroupContext(Family f, int rank) : family_(f), rank_(rank) {}

  Family family_;
  int rank_ = 0;
  // Table family only:
  std::vector<std::vector<int>> table_;
  std::vector<int> table_inverse_;
  int table_identity_ = -1;

  friend class ElementSet;
};

using ContextPtr = std::shared_ptr<const GroupContext>;

/// Ball of radius r: all products of at most r factors from `gens`.
/// Requires gens symmetric with identity and r >= 0. Deduplicated, canonical
/// order. Declared here, defined with ElementSet.
ElementSet ball(const ContextPtr& ctx, const ElementSet& gens, int radius);

// Low-level word routines shared with the product engine.
namespace detail {

/// out := u . v, freely reduced. out may not alias u or v.
void word_concat(const Int* u, std::size_t un, const Int* v, std::size_t vn,
                 IntPayload& out);
void word_invert(std::span<const Int> w, IntPayload& out);
/// Push one signed symbol onto a reduced run stack.
void word_push_symbol(IntPayload& runs, int symbol);

void heisenberg_mul(const Int* a, const Int* b, Int* out);
MatrixPayload matrix_mul(const MatrixPayload& a, const MatrixPayload& b);
MatrixPayload matrix_inverse(const MatrixPayload& m);
bool matrix_is_identity(const MatrixPayload& m);

Int checked_add(Int a, Int b);
Int checked_mul(Int a, Int b);

}  // namespace detail

}  // namespace apx
