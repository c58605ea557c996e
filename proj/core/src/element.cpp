#include "apxgroups/element.hpp"

#include <boost/container_hash/hash.hpp>

namespace apx {

std::uint64_t hash_element(const Element& e) {
  if (!e.is_matrix()) {
    auto s = e.int_span();
    return hash_int_span(s.data(), s.size());
  }
  const MatrixPayload& m = e.matrix();
  std::size_t h = boost::hash<std::uint32_t>()(m.n);
  for (const Rational& r : m.entries) {
    boost::hash_combine(h, numerator(r));
    boost::hash_combine(h, denominator(r));
  }
  return mix64(h);
}

int compare_words(std::span<const Int> a, std::span<const Int> b) {
  std::size_t ia = 0, ib = 0;
  Int consumed_a = 0, consumed_b = 0;
  while (ia < a.size() && ib < b.size()) {
    int ga = run_gen(a[ia]);
    int gb = run_gen(b[ib]);
    if (ga != gb) return ga < gb ? -1 : 1;
    Int ra = run_count(a[ia]) - consumed_a;
    Int rb = run_count(b[ib]) - consumed_b;
    Int step = ra < rb ? ra : rb;
    consumed_a += step;
    consumed_b += step;
    if (consumed_a == run_count(a[ia])) { ++ia; consumed_a = 0; }
    if (consumed_b == run_count(b[ib])) { ++ib; consumed_b = 0; }
  }
  bool end_a = ia == a.size();
  bool end_b = ib == b.size();
  if (end_a && end_b) return 0;
  return end_a ? -1 : 1;
}

int compare_int_tuples(std::span<const Int> a, std::span<const Int> b) {
  std::size_t n = a.size() < b.size() ? a.size() : b.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  if (a.size() == b.size()) return 0;
  return a.size() < b.size() ? -1 : 1;
}

int compare_matrices(const MatrixPayload& a, const MatrixPayload& b) {
  if (a.n != b.n) return a.n < b.n ? -1 : 1;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    const Rational& x = a.entries[i];
    const Rational& y = b.entries[i];
    BigInt nx = numerator(x), ny = numerator(y);
    if (nx != ny) return nx < ny ? -1 : 1;
    BigInt dx = denominator(x), dy = denominator(y);
    if (dx != dy) return dx < dy ? -1 : 1;
  }
  return 0;
}

}  // namespace apx
