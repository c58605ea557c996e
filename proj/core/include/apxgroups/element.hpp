#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "apxgroups/rational.hpp"

namespace apx {

using Int = std::int64_t;

// ---------------------------------------------------------------------------
// Free-group words are stored run-length encoded. A run packs a signed
// generator index (upper 16 bits) and a repeat count (lower 48 bits) into one
// int64, so a word like a^900 b^-3 is two machine words. Packing is injective
// for |gen| < 2^15 and 1 <= count < 2^48, which bounds the supported
// generator rank and word length.
// ---------------------------------------------------------------------------
using Run = std::int64_t;

constexpr int kRunCountBits = 48;
constexpr Int kMaxRunCount = (Int(1) << kRunCountBits) - 1;
constexpr Int kRunCountMask = kMaxRunCount;

inline Run make_run(int gen, Int count) {
  return (Run(gen) << kRunCountBits) | count;
}
inline int run_gen(Run r) { return static_cast<int>(r >> kRunCountBits); }
inline Int run_count(Run r) { return r & kRunCountMask; }

/// Flat integer payload. Holds, depending on the owning family:
/// free-group runs, lattice coordinates, a Heisenberg triple, or a single
/// multiplication-table index. Three inline slots cover the common cases
/// without heap traffic.
using IntPayload = boost::container::small_vector<Int, 3>;

/// Square matrix with exact rational entries in lowest terms, row-major.
struct MatrixPayload {
  std::uint32_t n = 0;
  std::vector<Rational> entries;

  bool operator==(const MatrixPayload& o) const {
    return n == o.n && entries == o.entries;
  }
};

/// An immutable group element in canonical form. The interpretation of the
/// payload belongs to the GroupContext; elements of the same context compare
/// and hash by payload alone.
class Element {
 public:
  Element() : payload_(IntPayload{}) {}
  explicit Element(IntPayload ints) : payload_(std::move(ints)) {}
  explicit Element(MatrixPayload mat) : payload_(std::move(mat)) {}

  bool is_matrix() const { return std::holds_alternative<MatrixPayload>(payload_); }

  const IntPayload& ints() const { return std::get<IntPayload>(payload_); }
  const MatrixPayload& matrix() const { return std::get<MatrixPayload>(payload_); }

  std::span<const Int> int_span() const {
    const IntPayload& p = std::get<IntPayload>(payload_);
    return {p.data(), p.size()};
  }

  bool operator==(const Element& o) const { return payload_ == o.payload_; }
  bool operator!=(const Element& o) const { return !(*this == o); }

 private:
  std::variant<IntPayload, MatrixPayload> payload_;
};

// ---------------------------------------------------------------------------
// Hashing. Same seed everywhere so set computations are reproducible across
// runs and thread counts (the final ordering never depends on hashes anyway).
// ---------------------------------------------------------------------------

inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

inline std::uint64_t hash_int_span(const Int* data, std::size_t n) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ (n * 0xbf58476d1ce4e5b9ULL);
  for (std::size_t i = 0; i < n; ++i)
    h = mix64(h ^ static_cast<std::uint64_t>(data[i]));
  return h;
}

std::uint64_t hash_element(const Element& e);

struct ElementHash {
  std::size_t operator()(const Element& e) const {
    return static_cast<std::size_t>(hash_element(e));
  }
};

// Total order helpers (family-specific canonical order lives in GroupContext;
// these are the payload primitives it builds on).

/// Lexicographic comparison of two RLE words over their expanded symbol
/// sequences; a proper prefix sorts first.
int compare_words(std::span<const Int> a, std::span<const Int> b);

/// Plain lexicographic comparison of integer tuples.
int compare_int_tuples(std::span<const Int> a, std::span<const Int> b);

/// Row-major entrywise comparison, each entry by numerator then denominator.
int compare_matrices(const MatrixPayload& a, const MatrixPayload& b);

}  // namespace apx
