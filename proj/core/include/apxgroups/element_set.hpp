#pragma once

#include <atomic>
#include <cstddef>
#include <optional>
#include <vector>

#include "apxgroups/group.hpp"

namespace apx {

/// Process-wide limits for set computations. `element_budget` caps the size
/// of any single computed set (hard BudgetError on overflow); `threads` is
/// the parallelism degree for large products (0 = hardware concurrency).
/// Results are bit-identical regardless of `threads`.
struct RuntimeConfig {
  std::size_t element_budget = 10'000'000;
  int threads = 0;
};

RuntimeConfig& runtime_config();

/// A finite, deduplicated set of group elements, stored in canonical order.
/// Immutable after construction; cheap to copy (shared storage is not used,
/// copies are real, but desk-scale sets are small).
class ElementSet {
 public:
  ElementSet() = default;
  /// Sorts, deduplicates and validates. Throws InputError on foreign
  /// elements, BudgetError past the element budget.
  ElementSet(ContextPtr ctx, std::vector<Element> elems);

  static ElementSet empty_set(ContextPtr ctx) { return ElementSet(std::move(ctx), {}); }
  static ElementSet single(ContextPtr ctx, Element e);

  const ContextPtr& context() const { return ctx_; }
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  const std::vector<Element>& elements() const { return elems_; }
  const Element& operator[](std::size_t i) const { return elems_[i]; }

  bool contains(const Element& e) const;
  bool is_subset_of(const ElementSet& other) const;
  /// First element of *this (canonical order) missing from `other`.
  std::optional<Element> first_missing_from(const ElementSet& other) const;

  /// True iff inv(x) is in the set for every member x. Lazily cached.
  bool is_symmetric() const;
  /// Lazily cached.
  bool contains_identity() const;

  ElementSet unite(const ElementSet& other) const;
  ElementSet intersect(const ElementSet& other) const;

  ElementSet(const ElementSet& o);
  ElementSet& operator=(const ElementSet& o);
  ElementSet(ElementSet&&) noexcept = default;
  ElementSet& operator=(ElementSet&&) noexcept = default;

  /// Internal factory: elements must already be in canonical order with no
  /// duplicates (exact precondition of the set operations that use it).
  static ElementSet from_sorted_unique(ContextPtr ctx, std::vector<Element> elems);

 private:
  ContextPtr ctx_;
  std::vector<Element> elems_;
  // -1 unknown, else 0/1. Benign lazy caches on an immutable value.
  mutable std::atomic<int> symmetric_{-1};
  mutable std::atomic<int> has_identity_{-1};
};

/// {s*t : s in S, t in T}, deduplicated, canonical order. Deterministic for
/// every parallelism degree. The workhorse of the library: large free-group
/// instances run a run-length-encoded kernel over flat hash tables.
ElementSet product(const ElementSet& s, const ElementSet& t);

/// S^k by iterated product, k >= 1.
ElementSet power(const ElementSet& s, int k);

/// S together with its inverses and the identity.
ElementSet symmetrize(const ElementSet& s);

/// Exact |S^2| / |S|.
Rational doubling_constant(const ElementSet& s);

ElementSet make_ball(const ContextPtr& ctx, const ElementSet& gens, int radius);

/// Keeps s[i] where keep[i] != 0; preserves canonical order without resorting.
ElementSet filter_sorted(const ElementSet& s, const std::vector<char>& keep);

}  // namespace apx
