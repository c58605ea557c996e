#include "apxgroups/element_set.hpp"

#include <algorithm>
#include <atomic>
#include <cstring>
#include <mutex>
#include <thread>

namespace apx {

RuntimeConfig& runtime_config() {
  static RuntimeConfig cfg;
  return cfg;
}

namespace {

int effective_threads() {
  int t = runtime_config().threads;
  if (t <= 0) t = static_cast<int>(std::thread::hardware_concurrency());
  return t < 1 ? 1 : t;
}

void check_budget(std::size_t n) {
  std::size_t budget = runtime_config().element_budget;
  if (n > budget)
    throw BudgetError("set of " + std::to_string(n) +
                          " elements exceeds the element budget of " +
                          std::to_string(budget),
                      budget);
}

}  // namespace

// ---------------------------------------------------------------------------
// ElementSet basics
// ---------------------------------------------------------------------------

ElementSet::ElementSet(ContextPtr ctx, std::vector<Element> elems)
    : ctx_(std::move(ctx)), elems_(std::move(elems)) {
  if (!ctx_) throw InputError("element set without a group context");
  for (const Element& e : elems_) ctx_->validate(e);
  const GroupContext& g = *ctx_;
  std::sort(elems_.begin(), elems_.end(),
            [&g](const Element& a, const Element& b) { return g.compare(a, b) < 0; });
  elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
  check_budget(elems_.size());
}

ElementSet ElementSet::from_sorted_unique(ContextPtr ctx,
                                           std::vector<Element> elems) {
  ElementSet s;
  s.ctx_ = std::move(ctx);
  s.elems_ = std::move(elems);
  check_budget(s.elems_.size());
  return s;
}

ElementSet::ElementSet(const ElementSet& o)
    : ctx_(o.ctx_),
      elems_(o.elems_),
      symmetric_(o.symmetric_.load()),
      has_identity_(o.has_identity_.load()) {}

ElementSet& ElementSet::operator=(const ElementSet& o) {
  if (this != &o) {
    ctx_ = o.ctx_;
    elems_ = o.elems_;
    symmetric_.store(o.symmetric_.load());
    has_identity_.store(o.has_identity_.load());
  }
  return *this;
}

ElementSet ElementSet::single(ContextPtr ctx, Element e) {
  std::vector<Element> v;
  v.push_back(std::move(e));
  return ElementSet(std::move(ctx), std::move(v));
}

bool ElementSet::contains(const Element& e) const {
  const GroupContext& g = *ctx_;
  auto it = std::lower_bound(
      elems_.begin(), elems_.end(), e,
      [&g](const Element& a, const Element& b) { return g.compare(a, b) < 0; });
  return it != elems_.end() && *it == e;
}

bool ElementSet::is_subset_of(const ElementSet& other) const {
  return !first_missing_from(other).has_value();
}

std::optional<Element> ElementSet::first_missing_from(const ElementSet& other) const {
  const GroupContext& g = *ctx_;
  std::size_t j = 0;
  for (const Element& e : elems_) {
    while (j < other.elems_.size() && g.compare(other.elems_[j], e) < 0) ++j;
    if (j == other.elems_.size() || !(other.elems_[j] == e)) return e;
  }
  return std::nullopt;
}

bool ElementSet::is_symmetric() const {
  int cached = symmetric_.load(std::memory_order_relaxed);
  if (cached >= 0) return cached != 0;
  bool sym = true;
  for (const Element& e : elems_) {
    if (!contains(ctx_->inv(e))) {
      sym = false;
      break;
    }
  }
  symmetric_.store(sym ? 1 : 0, std::memory_order_relaxed);
  return sym;
}

bool ElementSet::contains_identity() const {
  int cached = has_identity_.load(std::memory_order_relaxed);
  if (cached >= 0) return cached != 0;
  bool has = contains(ctx_->identity());
  has_identity_.store(has ? 1 : 0, std::memory_order_relaxed);
  return has;
}

ElementSet ElementSet::unite(const ElementSet& other) const {
  if (!ctx_->same_group(*other.ctx_)) throw InputError("context mismatch in union");
  const GroupContext& g = *ctx_;
  std::vector<Element> out;
  out.reserve(elems_.size() + other.elems_.size());
  std::size_t i = 0, j = 0;
  while (i < elems_.size() && j < other.elems_.size()) {
    int c = g.compare(elems_[i], other.elems_[j]);
    if (c < 0)
      out.push_back(elems_[i++]);
    else if (c > 0)
      out.push_back(other.elems_[j++]);
    else {
      out.push_back(elems_[i++]);
      ++j;
    }
  }
  out.insert(out.end(), elems_.begin() + i, elems_.end());
  out.insert(out.end(), other.elems_.begin() + j, other.elems_.end());
  return from_sorted_unique(ctx_, std::move(out));
}

ElementSet ElementSet::intersect(const ElementSet& other) const {
  if (!ctx_->same_group(*other.ctx_)) throw InputError("context mismatch in intersection");
  const GroupContext& g = *ctx_;
  std::vector<Element> out;
  std::size_t i = 0, j = 0;
  while (i < elems_.size() && j < other.elems_.size()) {
    int c = g.compare(elems_[i], other.elems_[j]);
    if (c < 0)
      ++i;
    else if (c > 0)
      ++j;
    else {
      out.push_back(elems_[i]);
      ++i;
      ++j;
    }
  }
  return from_sorted_unique(ctx_, std::move(out));
}

ElementSet filter_sorted(const ElementSet& s, const std::vector<char>& keep) {
  std::vector<Element> out;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (keep[i]) out.push_back(s[i]);
  return ElementSet::from_sorted_unique(s.context(), std::move(out));
}

// ---------------------------------------------------------------------------
// Product engine.
//
// All families share the same outline: multiply every pair into a scratch
// payload, deduplicate through flat open-addressing tables keyed by payload
// hash, then sort once at the end (which is what makes the result independent
// of evaluation order and thread count).
//
// The integer-payload families additionally get:
//   * a per-worker exact "seen" filter with the payload inlined in the slot,
//     so the 99%-duplicate regime costs one cache probe per pair and no lock;
//   * sharded global tables so workers only synchronize on first sightings.
// ---------------------------------------------------------------------------

namespace {

constexpr std::size_t kSmallPairLimit = std::size_t(1) << 22;
constexpr int kShardBits = 6;
constexpr std::size_t kShardCount = std::size_t(1) << kShardBits;

// Exact worker-local duplicate filters. They may forget entries (reset when
// full) but must never claim an unseen payload seen; everything they pass
// through is re-checked against the shared shard tables.
//
// Two tiers, sized so the hot one stays cache-resident under the default
// element budget: 16-byte slots for payloads of at most one word (single-run
// words, rank-1 lattices, table indices), and a small 32-byte-slot table for
// payloads of two or three words.

class ShortFilter {
 public:
  static constexpr std::size_t kSlots = std::size_t(1) << 19;  // 8 MiB
  ShortFilter() : slots_(kSlots) { clear(); }

  void clear() {
    count_ = 0;
    std::memset(slots_.data(), 0, slots_.size() * sizeof(Slot));
  }

  const void* slot_address(std::uint64_t h) const {
    return &slots_[h & (kSlots - 1)];
  }

  // n must be 0 or 1. The tag keeps 60 hash bits plus the length, so equal
  // tags with equal payload words mean equal payloads, exactly.
  bool check_and_add(std::uint64_t h, const Int* p, std::size_t n) {
    const std::uint64_t tag = (h & ~std::uint64_t(3)) | (n + 1);
    const Int word = n ? p[0] : 0;
    std::size_t pos = h & (kSlots - 1);
    while (true) {
      Slot& s = slots_[pos];
      if (s.tag == 0) {
        if (count_ + 1 > kSlots / 2) {
          clear();
          return false;
        }
        s.tag = tag;
        s.p0 = word;
        ++count_;
        return false;
      }
      if (s.tag == tag && s.p0 == word) return true;
      pos = (pos + 1) & (kSlots - 1);
    }
  }

 private:
  struct Slot {
    std::uint64_t tag;  // 0 = empty
    Int p0;
  };
  static_assert(sizeof(Slot) == 16);
  std::vector<Slot> slots_;
  std::size_t count_ = 0;
};

class MidFilter {
 public:
  static constexpr std::size_t kSlots = std::size_t(1) << 16;  // 2 MiB
  MidFilter() : slots_(kSlots) { clear(); }

  void clear() {
    count_ = 0;
    std::memset(slots_.data(), 0xFF, slots_.size() * sizeof(Slot));
  }

  const void* slot_address(std::uint64_t h) const {
    return &slots_[h & (kSlots - 1)];
  }

  // n must be 2 or 3.
  bool check_and_add(std::uint64_t h, const Int* p, std::size_t n) {
    std::size_t pos = h & (kSlots - 1);
    while (true) {
      Slot& s = slots_[pos];
      if (s.nwords == kEmpty) {
        if (count_ + 1 > kSlots / 2) {
          clear();
          return false;
        }
        s.nwords = static_cast<std::int32_t>(n);
        for (std::size_t i = 0; i < n; ++i) s.p[i] = p[i];
        ++count_;
        return false;
      }
      if (s.nwords == static_cast<std::int32_t>(n) && s.p[0] == p[0] &&
          s.p[1] == p[1] && (n < 3 || s.p[2] == p[2]))
        return true;
      pos = (pos + 1) & (kSlots - 1);
    }
  }

 private:
  static constexpr std::int32_t kEmpty = -1;
  struct Slot {
    Int p[3];
    std::int32_t nwords;
    std::int32_t pad;
  };
  static_assert(sizeof(Slot) == 32);
  std::vector<Slot> slots_;
  std::size_t count_ = 0;
};

struct LocalFilter {
  ShortFilter short_tier;
  MidFilter mid_tier;

  const void* slot_address(std::uint64_t h, std::size_t n) const {
    return n <= 1 ? short_tier.slot_address(h) : mid_tier.slot_address(h);
  }

  bool check_and_add(std::uint64_t h, const Int* p, std::size_t n) {
    if (n <= 1) return short_tier.check_and_add(h, p, n);
    return mid_tier.check_and_add(h, p, n);
  }
};

// Deduplicating table over an element arena; compares via the arena, so it
// handles arbitrary payload sizes. Not thread-safe; shard-level locking is
// the caller's job.
class DedupTable {
 public:
  explicit DedupTable(std::size_t initial_slots = 1 << 10) { rehash(initial_slots); }

  // Inserts the payload if new. Returns true if inserted. `make` materializes
  // the Element; `equals` compares the candidate against an arena index.
  template <class Equals, class Make>
  bool insert(std::uint64_t h, Equals&& equals, Make&& make) {
    if ((count_ + 1) * 5 > slots_.size() * 3) rehash(slots_.size() * 2);
    std::size_t mask = slots_.size() - 1;
    std::size_t pos = h & mask;
    while (true) {
      Slot& s = slots_[pos];
      if (s.idx == kEmpty) {
        s.hash = h;
        s.idx = make();
        ++count_;
        return true;
      }
      if (s.hash == h && equals(s.idx)) return false;
      pos = (pos + 1) & mask;
    }
  }

  std::size_t size() const { return count_; }

 private:
  static constexpr std::uint32_t kEmpty = 0xFFFFFFFFu;
  struct Slot {
    std::uint64_t hash;
    std::uint32_t idx;
  };

  void rehash(std::size_t n) {
    std::vector<Slot> old = std::move(slots_);
    slots_.assign(n, Slot{0, kEmpty});
    std::size_t mask = n - 1;
    for (const Slot& s : old) {
      if (s.idx == kEmpty) continue;
      std::size_t pos = s.hash & mask;
      while (slots_[pos].idx != kEmpty) pos = (pos + 1) & mask;
      slots_[pos] = s;
    }
  }

  std::vector<Slot> slots_;
  std::size_t count_ = 0;
};

// -- integer-payload kernels -------------------------------------------------

struct FreeMul {
  void operator()(std::span<const Int> a, std::span<const Int> b,
                  IntPayload& out) const {
    detail::word_concat(a.data(), a.size(), b.data(), b.size(), out);
  }
};

struct AbelianMul {
  int rank;
  void operator()(std::span<const Int> a, std::span<const Int> b,
                  IntPayload& out) const {
    out.resize(rank);
    for (int i = 0; i < rank; ++i) out[i] = detail::checked_add(a[i], b[i]);
  }
};

struct HeisenbergMul {
  void operator()(std::span<const Int> a, std::span<const Int> b,
                  IntPayload& out) const {
    out.resize(3);
    detail::heisenberg_mul(a.data(), b.data(), out.data());
  }
};

std::vector<std::span<const Int>> payload_spans(const ElementSet& s) {
  std::vector<std::span<const Int>> spans;
  spans.reserve(s.size());
  for (const Element& e : s.elements()) spans.push_back(e.int_span());
  return spans;
}

struct IntShard {
  std::mutex mu;
  DedupTable table;
  std::vector<Element> elems;
};

bool spans_equal(std::span<const Int> a, std::span<const Int> b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(Int)) == 0;
}

template <class Mul>
ElementSet int_product_parallel(const ElementSet& S, const ElementSet& T, Mul mul) {
  const int nthreads = effective_threads();
  const std::size_t budget = runtime_config().element_budget;

  std::vector<IntShard> shards(kShardCount);
  std::atomic<std::size_t> total{0};
  std::atomic<bool> over_budget{false};
  std::atomic<std::size_t> next_block{0};
  constexpr std::size_t kBlock = 16;

  const std::vector<std::span<const Int>> sspans = payload_spans(S);
  const std::vector<std::span<const Int>> tspans = payload_spans(T);

  auto worker = [&]() {
    LocalFilter local;
    IntPayload scratch;
    while (!over_budget.load(std::memory_order_relaxed)) {
      std::size_t begin = next_block.fetch_add(kBlock, std::memory_order_relaxed);
      if (begin >= sspans.size()) break;
      std::size_t end = std::min(sspans.size(), begin + kBlock);
      for (std::size_t i = begin; i < end; ++i) {
        const std::span<const Int> s = sspans[i];
        const std::size_t tn = tspans.size();
        // Two-stage software pipeline: compute and prefetch the next
        // product's filter slot while probing the current one, hiding the
        // cache miss that otherwise dominates this loop.
        IntPayload scratch2;
        IntPayload* cur = &scratch;
        IntPayload* nxt = &scratch2;
        std::uint64_t hcur = 0, hnxt = 0;
        mul(s, tspans[0], *cur);
        hcur = hash_int_span(cur->data(), cur->size());
        __builtin_prefetch(local.slot_address(hcur, cur->size()));
        for (std::size_t j = 0; j < tn; ++j) {
          if (j + 1 < tn) {
            mul(s, tspans[j + 1], *nxt);
            hnxt = hash_int_span(nxt->data(), nxt->size());
            __builtin_prefetch(local.slot_address(hnxt, nxt->size()));
          }
          const Int* p = cur->data();
          const std::size_t n = cur->size();
          const std::uint64_t h = hcur;
          if (!(n <= 3 && local.check_and_add(h, p, n))) {
            IntShard& shard = shards[(h >> 58) & (kShardCount - 1)];
            std::lock_guard<std::mutex> lock(shard.mu);
            bool inserted = shard.table.insert(
                h,
                [&](std::uint32_t idx) {
                  return spans_equal(shard.elems[idx].int_span(), {p, n});
                },
                [&]() {
                  shard.elems.emplace_back(IntPayload(cur->begin(), cur->end()));
                  return static_cast<std::uint32_t>(shard.elems.size() - 1);
                });
            if (inserted &&
                total.fetch_add(1, std::memory_order_relaxed) + 1 > budget)
              over_budget.store(true, std::memory_order_relaxed);
          }
          std::swap(cur, nxt);
          hcur = hnxt;
        }
        if (over_budget.load(std::memory_order_relaxed)) break;
      }
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(nthreads);
  for (int i = 0; i < nthreads; ++i) threads.emplace_back(worker);
  for (auto& th : threads) th.join();

  if (over_budget.load())
    throw BudgetError("product exceeds the element budget of " + std::to_string(budget),
                      budget);

  std::vector<Element> out;
  out.reserve(total.load());
  for (IntShard& shard : shards)
    for (Element& e : shard.elems) out.push_back(std::move(e));

  const GroupContext& g = *S.context();
  std::sort(out.begin(), out.end(),
            [&g](const Element& a, const Element& b) { return g.compare(a, b) < 0; });
  return ElementSet::from_sorted_unique(S.context(), std::move(out));
}

template <class Mul>
ElementSet int_product_serial(const ElementSet& S, const ElementSet& T, Mul mul) {
  const std::size_t budget = runtime_config().element_budget;
  DedupTable table;
  std::vector<Element> elems;
  IntPayload scratch;
  const std::vector<std::span<const Int>> sspans = payload_spans(S);
  const std::vector<std::span<const Int>> tspans = payload_spans(T);
  for (const std::span<const Int> s : sspans) {
    for (const std::span<const Int> t : tspans) {
      mul(s, t, scratch);
      const Int* p = scratch.data();
      const std::size_t n = scratch.size();
      std::uint64_t h = hash_int_span(p, n);
      table.insert(
          h,
          [&](std::uint32_t idx) { return spans_equal(elems[idx].int_span(), {p, n}); },
          [&]() {
            elems.emplace_back(IntPayload(scratch.begin(), scratch.end()));
            return static_cast<std::uint32_t>(elems.size() - 1);
          });
      if (elems.size() > budget)
        throw BudgetError(
            "product exceeds the element budget of " + std::to_string(budget), budget);
    }
  }
  const GroupContext& g = *S.context();
  std::sort(elems.begin(), elems.end(),
            [&g](const Element& a, const Element& b) { return g.compare(a, b) < 0; });
  return ElementSet::from_sorted_unique(S.context(), std::move(elems));
}

ElementSet table_product(const ElementSet& S, const ElementSet& T) {
  const GroupContext& g = *S.context();
  const auto& table = g.table();
  std::vector<char> seen(g.table_order(), 0);
  for (const Element& s : S.elements())
    for (const Element& t : T.elements())
      seen[table[s.ints()[0]][t.ints()[0]]] = 1;
  std::vector<Element> out;
  for (int i = 0; i < g.table_order(); ++i)
    if (seen[i]) out.push_back(g.table_element(i));
  return ElementSet::from_sorted_unique(S.context(), std::move(out));
}

ElementSet matrix_product(const ElementSet& S, const ElementSet& T) {
  const std::size_t budget = runtime_config().element_budget;
  DedupTable table;
  std::vector<Element> elems;
  for (const Element& s : S.elements()) {
    for (const Element& t : T.elements()) {
      MatrixPayload prod = detail::matrix_mul(s.matrix(), t.matrix());
      Element cand(std::move(prod));
      std::uint64_t h = hash_element(cand);
      table.insert(
          h, [&](std::uint32_t idx) { return elems[idx] == cand; },
          [&]() {
            elems.push_back(std::move(cand));
            return static_cast<std::uint32_t>(elems.size() - 1);
          });
      if (elems.size() > budget)
        throw BudgetError(
            "product exceeds the element budget of " + std::to_string(budget), budget);
    }
  }
  const GroupContext& g = *S.context();
  std::sort(elems.begin(), elems.end(),
            [&g](const Element& a, const Element& b) { return g.compare(a, b) < 0; });
  return ElementSet::from_sorted_unique(S.context(), std::move(elems));
}

}  // namespace

ElementSet product(const ElementSet& s, const ElementSet& t) {
  if (!s.context() || !t.context()) throw InputError("product of uninitialized sets");
  if (!s.context()->same_group(*t.context()))
    throw InputError("context mismatch in product");
  if (s.empty() || t.empty()) return ElementSet::empty_set(s.context());

  const GroupContext& g = *s.context();
  const std::size_t pairs = s.size() * t.size();
  const bool parallel = pairs > kSmallPairLimit && effective_threads() > 1;

  switch (g.family()) {
    case Family::Table:
      return table_product(s, t);
    case Family::Matrix:
      return matrix_product(s, t);
    case Family::Free:
      return parallel ? int_product_parallel(s, t, FreeMul{})
                      : int_product_serial(s, t, FreeMul{});
    case Family::Abelian: {
      AbelianMul mul{g.rank()};
      return parallel ? int_product_parallel(s, t, mul)
                      : int_product_serial(s, t, mul);
    }
    case Family::Heisenberg:
      return parallel ? int_product_parallel(s, t, HeisenbergMul{})
                      : int_product_serial(s, t, HeisenbergMul{});
  }
  throw InputError("unknown family");
}

ElementSet power(const ElementSet& s, int k) {
  if (k < 1) throw InputError("power exponent must be >= 1");
  ElementSet acc = s;
  for (int i = 1; i < k; ++i) acc = product(acc, s);
  return acc;
}

ElementSet symmetrize(const ElementSet& s) {
  const GroupContext& g = *s.context();
  std::vector<Element> out;
  out.reserve(2 * s.size() + 1);
  out.push_back(g.identity());
  for (const Element& e : s.elements()) {
    out.push_back(e);
    out.push_back(g.inv(e));
  }
  return ElementSet(s.context(), std::move(out));
}

Rational doubling_constant(const ElementSet& s) {
  if (s.empty()) throw InputError("doubling constant of the empty set");
  ElementSet sq = product(s, s);
  return Rational(BigInt(sq.size()), BigInt(s.size()));
}

ElementSet make_ball(const ContextPtr& ctx, const ElementSet& gens, int radius) {
  if (radius < 0) throw InputError("ball radius must be >= 0");
  if (!gens.contains_identity())
    throw InputError("generating set must contain the identity");
  if (!gens.is_symmetric()) throw InputError("generating set must be symmetric");
  ElementSet ball_set = ElementSet::single(ctx, ctx->identity());
  ElementSet frontier = ball_set;
  for (int step = 0; step < radius; ++step) {
    ElementSet grown = product(frontier, gens);
    // new elements only ever come from the frontier
    std::vector<char> fresh(grown.size(), 0);
    bool any = false;
    for (std::size_t i = 0; i < grown.size(); ++i) {
      if (!ball_set.contains(grown[i])) {
        fresh[i] = 1;
        any = true;
      }
    }
    if (!any) break;
    frontier = filter_sorted(grown, fresh);
    ball_set = ball_set.unite(frontier);
  }
  return ball_set;
}

ElementSet ball(const ContextPtr& ctx, const ElementSet& gens, int radius) {
  return make_ball(ctx, gens, radius);
}

}  // namespace apx
