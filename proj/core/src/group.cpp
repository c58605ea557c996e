#include "apxgroups/group.hpp"

#include <algorithm>
#include <cstring>
#include <limits>

namespace apx {

namespace detail {

Int checked_add(Int a, Int b) {
  Int out;
  if (__builtin_add_overflow(a, b, &out))
    throw OverflowError("integer coordinate overflow in addition");
  return out;
}

Int checked_mul(Int a, Int b) {
  Int out;
  if (__builtin_mul_overflow(a, b, &out))
    throw OverflowError("integer coordinate overflow in multiplication");
  return out;
}

void word_push_symbol(IntPayload& runs, int symbol) {
  if (symbol == 0) throw InputError("generator index 0 is not a symbol");
  if (!runs.empty()) {
    int g = run_gen(runs.back());
    if (g == symbol) {
      Int c = run_count(runs.back());
      if (c + 1 > kMaxRunCount) throw OverflowError("word run count overflow");
      runs.back() = make_run(g, c + 1);
      return;
    }
    if (g == -symbol) {
      Int c = run_count(runs.back());
      if (c == 1)
        runs.pop_back();
      else
        runs.back() = make_run(g, c - 1);
      return;
    }
  }
  runs.push_back(make_run(symbol, 1));
}

void word_concat(const Int* u, std::size_t un, const Int* v, std::size_t vn,
                 IntPayload& out) {
  // Scan the seam first, then assemble in one pass. Cancellation happens only
  // at the seam; once some run survives intact the rest appends verbatim
  // (adjacent runs of a reduced word are neither equal nor mutually inverse),
  // so at most one boundary run ever needs rewriting.
  std::size_t i = un;  // u[0..i) survives
  std::size_t j = 0;   // v[j..vn) survives
  Run boundary = 0;
  bool has_boundary = false;
  while (i > 0 && j < vn) {
    const Run a = u[i - 1];
    const Run b = v[j];
    const int ga = run_gen(a);
    const int gb = run_gen(b);
    if (ga == gb) {
      Int c = run_count(a) + run_count(b);
      if (c > kMaxRunCount) throw OverflowError("word run count overflow");
      boundary = make_run(ga, c);
      has_boundary = true;
      --i;
      ++j;
      break;
    }
    if (ga != -gb) break;
    const Int ca = run_count(a);
    const Int cb = run_count(b);
    --i;
    ++j;
    if (ca == cb) continue;  // exact cancellation exposes a fresh seam
    boundary = ca > cb ? make_run(ga, ca - cb) : make_run(gb, cb - ca);
    has_boundary = true;
    break;
  }
  const std::size_t tail = vn - j;
  out.resize(i + (has_boundary ? 1 : 0) + tail);
  Int* d = out.data();
  if (i) std::memcpy(d, u, i * sizeof(Run));
  if (has_boundary) d[i] = boundary;
  if (tail) std::memcpy(d + i + (has_boundary ? 1 : 0), v + j, tail * sizeof(Run));
}

void word_invert(std::span<const Int> w, IntPayload& out) {
  out.clear();
  out.reserve(w.size());
  for (std::size_t i = w.size(); i-- > 0;)
    out.push_back(make_run(-run_gen(w[i]), run_count(w[i])));
}

void heisenberg_mul(const Int* a, const Int* b, Int* out) {
  out[0] = checked_add(a[0], b[0]);
  out[1] = checked_add(a[1], b[1]);
  out[2] = checked_add(checked_add(a[2], b[2]), checked_mul(a[0], b[1]));
}

MatrixPayload matrix_mul(const MatrixPayload& a, const MatrixPayload& b) {
  MatrixPayload out;
  out.n = a.n;
  const std::uint32_t n = a.n;
  out.entries.assign(std::size_t(n) * n, Rational(0));
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t k = 0; k < n; ++k) {
      const Rational& aik = a.entries[i * n + k];
      if (aik == 0) continue;
      for (std::uint32_t j = 0; j < n; ++j)
        out.entries[i * n + j] += aik * b.entries[k * n + j];
    }
  return out;
}

MatrixPayload matrix_inverse(const MatrixPayload& m) {
  const std::uint32_t n = m.n;
  // Gauss-Jordan over the rationals on [m | I].
  std::vector<Rational> a = m.entries;
  MatrixPayload inv;
  inv.n = n;
  inv.entries.assign(std::size_t(n) * n, Rational(0));
  for (std::uint32_t i = 0; i < n; ++i) inv.entries[i * n + i] = 1;
  for (std::uint32_t col = 0; col < n; ++col) {
    std::uint32_t pivot = col;
    while (pivot < n && a[pivot * n + col] == 0) ++pivot;
    if (pivot == n) throw InputError("matrix is singular");
    if (pivot != col) {
      for (std::uint32_t j = 0; j < n; ++j) {
        std::swap(a[pivot * n + j], a[col * n + j]);
        std::swap(inv.entries[pivot * n + j], inv.entries[col * n + j]);
      }
    }
    Rational d = a[col * n + col];
    for (std::uint32_t j = 0; j < n; ++j) {
      a[col * n + j] /= d;
      inv.entries[col * n + j] /= d;
    }
    for (std::uint32_t row = 0; row < n; ++row) {
      if (row == col) continue;
      Rational f = a[row * n + col];
      if (f == 0) continue;
      for (std::uint32_t j = 0; j < n; ++j) {
        a[row * n + j] -= f * a[col * n + j];
        inv.entries[row * n + j] -= f * inv.entries[col * n + j];
      }
    }
  }
  return inv;
}

bool matrix_is_identity(const MatrixPayload& m) {
  const std::uint32_t n = m.n;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j)
      if (m.entries[i * n + j] != Rational(i == j ? 1 : 0)) return false;
  return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Factories
// ---------------------------------------------------------------------------

ContextPtr GroupContext::free_group(int rank) {
  if (rank < 1 || rank > 1000) throw InputError("free group rank must be in [1, 1000]");
  return std::shared_ptr<const GroupContext>(new GroupContext(Family::Free, rank));
}

ContextPtr GroupContext::free_abelian(int rank) {
  if (rank < 1 || rank > 64) throw InputError("free abelian rank must be in [1, 64]");
  return std::shared_ptr<const GroupContext>(new GroupContext(Family::Abelian, rank));
}

ContextPtr GroupContext::heisenberg() {
  return std::shared_ptr<const GroupContext>(new GroupContext(Family::Heisenberg, 3));
}

ContextPtr GroupContext::matrix_group(int n) {
  if (n < 1 || n > 16) throw InputError("matrix dimension must be in [1, 16]");
  return std::shared_ptr<const GroupContext>(new GroupContext(Family::Matrix, n));
}

ContextPtr GroupContext::finite_table(std::vector<std::vector<int>> table) {
  const int n = static_cast<int>(table.size());
  if (n < 1 || n > 256) throw InputError("table order must be in [1, 256]");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(table[i].size()) != n)
      throw InputError("table row " + std::to_string(i) + " has wrong length");
    for (int j = 0; j < n; ++j)
      if (table[i][j] < 0 || table[i][j] >= n)
        throw InputError("table entry (" + std::to_string(i) + "," +
                         std::to_string(j) + ") out of range");
  }
  int id = -1;
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x)
      ok = table[e][x] == x && table[x][e] == x;
    if (ok) { id = e; break; }
  }
  if (id < 0) throw InputError("table has no two-sided identity");
  std::vector<int> inverse(n, -1);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y)
      if (table[x][y] == id && table[y][x] == id) { inverse[x] = y; break; }
    if (inverse[x] < 0)
      throw InputError("table element " + std::to_string(x) + " has no inverse");
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (table[table[x][y]][z] != table[x][table[y][z]])
          throw InputError("table is not associative at (" + std::to_string(x) +
                           "," + std::to_string(y) + "," + std::to_string(z) + ")");
  auto ctx = new GroupContext(Family::Table, n);
  ctx->table_ = std::move(table);
  ctx->table_inverse_ = std::move(inverse);
  ctx->table_identity_ = id;
  return std::shared_ptr<const GroupContext>(ctx);
}

bool GroupContext::same_group(const GroupContext& other) const {
  if (family_ != other.family_ || rank_ != other.rank_) return false;
  if (family_ == Family::Table) return table_ == other.table_;
  return true;
}

// ---------------------------------------------------------------------------
// Element construction
// ---------------------------------------------------------------------------

Element GroupContext::identity() const {
  switch (family_) {
    case Family::Free:
      return Element(IntPayload{});
    case Family::Abelian:
      return Element(IntPayload(rank_, 0));
    case Family::Heisenberg:
      return Element(IntPayload(3, 0));
    case Family::Matrix: {
      MatrixPayload m;
      m.n = rank_;
      m.entries.assign(std::size_t(rank_) * rank_, Rational(0));
      for (int i = 0; i < rank_; ++i) m.entries[i * rank_ + i] = 1;
      return Element(std::move(m));
    }
    case Family::Table:
      return Element(IntPayload{table_identity_});
  }
  throw InputError("unknown family");
}

Element GroupContext::word(const std::vector<int>& symbols) const {
  if (family_ != Family::Free) throw InputError("word(): context is not a free group");
  IntPayload runs;
  for (int s : symbols) {
    if (s == 0 || s > rank_ || s < -rank_)
      throw InputError("word symbol " + std::to_string(s) + " out of range for rank " +
                       std::to_string(rank_));
    detail::word_push_symbol(runs, s);
  }
  return Element(std::move(runs));
}

Element GroupContext::tuple(const std::vector<Int>& coords) const {
  if (family_ == Family::Abelian) {
    if (static_cast<int>(coords.size()) != rank_)
      throw InputError("tuple length does not match lattice rank");
  } else if (family_ == Family::Heisenberg) {
    if (coords.size() != 3) throw InputError("Heisenberg elements are integer triples");
  } else {
    throw InputError("tuple(): context is not a lattice or Heisenberg group");
  }
  return Element(IntPayload(coords.begin(), coords.end()));
}

Element GroupContext::matrix(std::vector<Rational> entries) const {
  if (family_ != Family::Matrix) throw InputError("matrix(): context is not a matrix group");
  if (entries.size() != std::size_t(rank_) * rank_)
    throw InputError("matrix entry count does not match dimension");
  MatrixPayload m;
  m.n = rank_;
  m.entries = std::move(entries);
  detail::matrix_inverse(m);  // throws InputError if singular
  return Element(std::move(m));
}

Element GroupContext::table_element(int index) const {
  if (family_ != Family::Table) throw InputError("table_element(): context is not a table group");
  if (index < 0 || index >= table_order())
    throw InputError("table index " + std::to_string(index) + " out of range");
  return Element(IntPayload{index});
}

// ---------------------------------------------------------------------------
// Group operations
// ---------------------------------------------------------------------------

Element GroupContext::mul(const Element& x, const Element& y) const {
  validate(x);
  validate(y);
  switch (family_) {
    case Family::Free: {
      IntPayload out;
      auto a = x.int_span();
      auto b = y.int_span();
      detail::word_concat(a.data(), a.size(), b.data(), b.size(), out);
      return Element(std::move(out));
    }
    case Family::Abelian: {
      IntPayload out(rank_, 0);
      auto a = x.int_span();
      auto b = y.int_span();
      for (int i = 0; i < rank_; ++i) out[i] = detail::checked_add(a[i], b[i]);
      return Element(std::move(out));
    }
    case Family::Heisenberg: {
      IntPayload out(3, 0);
      detail::heisenberg_mul(x.int_span().data(), y.int_span().data(), out.data());
      return Element(std::move(out));
    }
    case Family::Matrix:
      return Element(detail::matrix_mul(x.matrix(), y.matrix()));
    case Family::Table:
      return Element(IntPayload{table_[x.ints()[0]][y.ints()[0]]});
  }
  throw InputError("unknown family");
}

Element GroupContext::inv(const Element& x) const {
  validate(x);
  switch (family_) {
    case Family::Free: {
      IntPayload out;
      detail::word_invert(x.int_span(), out);
      return Element(std::move(out));
    }
    case Family::Abelian: {
      IntPayload out(rank_, 0);
      auto a = x.int_span();
      for (int i = 0; i < rank_; ++i) {
        if (a[i] == std::numeric_limits<Int>::min())
          throw OverflowError("integer coordinate overflow in negation");
        out[i] = -a[i];
      }
      return Element(std::move(out));
    }
    case Family::Heisenberg: {
      auto a = x.int_span();
      IntPayload out(3, 0);
      out[0] = -a[0];
      out[1] = -a[1];
      out[2] = detail::checked_add(detail::checked_mul(a[0], a[1]), -a[2]);
      return Element(std::move(out));
    }
    case Family::Matrix:
      return Element(detail::matrix_inverse(x.matrix()));
    case Family::Table:
      return Element(IntPayload{table_inverse_[x.ints()[0]]});
  }
  throw InputError("unknown family");
}

bool GroupContext::is_identity(const Element& x) const {
  switch (family_) {
    case Family::Free:
      return x.int_span().empty();
    case Family::Abelian:
    case Family::Heisenberg: {
      for (Int v : x.int_span())
        if (v != 0) return false;
      return true;
    }
    case Family::Matrix:
      return detail::matrix_is_identity(x.matrix());
    case Family::Table:
      return x.ints()[0] == table_identity_;
  }
  return false;
}

int GroupContext::compare(const Element& a, const Element& b) const {
  switch (family_) {
    case Family::Free:
      return compare_words(a.int_span(), b.int_span());
    case Family::Matrix:
      return compare_matrices(a.matrix(), b.matrix());
    default:
      return compare_int_tuples(a.int_span(), b.int_span());
  }
}

void GroupContext::validate(const Element& x) const {
  if (family_ == Family::Matrix) {
    if (!x.is_matrix()) throw InputError("element is not a matrix");
    if (x.matrix().n != static_cast<std::uint32_t>(rank_))
      throw InputError("matrix dimension mismatch");
    return;
  }
  if (x.is_matrix()) throw InputError("matrix element in a non-matrix group");
  switch (family_) {
    case Family::Free: {
      for (Run r : x.int_span()) {
        int g = run_gen(r);
        if (g == 0 || g > rank_ || g < -rank_)
          throw InputError("word generator out of range");
        if (run_count(r) < 1) throw InputError("word run with non-positive count");
      }
      break;
    }
    case Family::Abelian:
      if (static_cast<int>(x.int_span().size()) != rank_)
        throw InputError("lattice vector length mismatch");
      break;
    case Family::Heisenberg:
      if (x.int_span().size() != 3) throw InputError("Heisenberg element is not a triple");
      break;
    case Family::Table: {
      if (x.int_span().size() != 1) throw InputError("table element is not an index");
      Int i = x.ints()[0];
      if (i < 0 || i >= table_order()) throw InputError("table index out of range");
      break;
    }
    default:
      break;
  }
}

std::vector<Element> GroupContext::standard_generators() const {
  std::vector<Element> gens;
  gens.push_back(identity());
  switch (family_) {
    case Family::Free:
      for (int g = 1; g <= rank_; ++g) {
        gens.push_back(word({g}));
        gens.push_back(word({-g}));
      }
      break;
    case Family::Abelian:
      for (int i = 0; i < rank_; ++i) {
        std::vector<Int> v(rank_, 0);
        v[i] = 1;
        gens.push_back(tuple(v));
        v[i] = -1;
        gens.push_back(tuple(v));
      }
      break;
    case Family::Heisenberg:
      gens.push_back(tuple({1, 0, 0}));
      gens.push_back(tuple({-1, 0, 0}));
      gens.push_back(tuple({0, 1, 0}));
      gens.push_back(tuple({0, -1, 0}));
      break;
    default:
      throw InputError("no standard generators for this family; supply them explicitly");
  }
  return gens;
}

std::string GroupContext::describe() const {
  switch (family_) {
    case Family::Free: return "free:" + std::to_string(rank_);
    case Family::Abelian: return "abelian:" + std::to_string(rank_);
    case Family::Heisenberg: return "heisenberg";
    case Family::Matrix: return "matrix:" + std::to_string(rank_);
    case Family::Table: return "table:" + std::to_string(table_order());
  }
  return "?";
}

}  // namespace apx
