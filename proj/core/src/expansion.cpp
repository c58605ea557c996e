#include "apxgroups/expansion.hpp"

#include <algorithm>
#include <map>

#include "apxgroups/covering.hpp"
#include "apxgroups/io.hpp"

namespace apx {

ExpansionReport expansion_ratio(const ElementSet& a, const ElementSet& x,
                                std::string test_set_source) {
  if (a.empty()) throw InputError("expansion_ratio: A must be nonempty");
  if (!a.context()->same_group(*x.context()))
    throw InputError("expansion_ratio: context mismatch");
  ElementSet ax = product(a, x);
  ExpansionReport r;
  r.a_size = a.size();
  r.ax_size = ax.size();
  r.ratio = Rational(BigInt(ax.size()), BigInt(a.size()));
  r.test_set_source = std::move(test_set_source);
  return r;
}

bool check_von_neumann(const ElementSet& a, const ElementSet& x) {
  if (!x.contains_identity())
    throw InputError("check_von_neumann: the test set must contain the identity");
  ExpansionReport r = expansion_ratio(a, x);
  return r.ratio >= Rational(5, 4);
}

int nesting_level_count(const Rational& epsilon, const Rational& k_bound) {
  if (epsilon <= 0) throw InputError("epsilon must be positive");
  if (k_bound <= 1) throw InputError("K must exceed 1");
  const Rational target = rational_pow(k_bound, 4);
  const Rational base = Rational(1) + epsilon;
  Rational acc = 1;
  int k = 0;
  constexpr int kCap = 1 << 20;
  while (acc < target) {
    acc *= base;
    ++k;
    if (k > kCap) throw InputError("epsilon too small: nesting depth exceeds cap");
  }
  // cross-check the incremental count against direct binary powering
  if (rational_pow(base, k) < target ||
      (k > 0 && rational_pow(base, k - 1) >= target))
    throw VerifyError("nesting level count mismatch between powering routes",
                      "k = " + std::to_string(k));
  return k;
}

NestingResult pigeonhole_nesting(const ElementSet& a, const ElementSet& b, int m,
                                 const Rational& epsilon, const Rational& k_bound) {
  if (m < 1) throw InputError("pigeonhole_nesting: m must be >= 1");
  if (!b.contains_identity())
    throw InputError("pigeonhole_nesting: B must contain the identity");
  if (!b.is_symmetric()) throw InputError("pigeonhole_nesting: B must be symmetric");
  if (!a.context()->same_group(*b.context()))
    throw InputError("pigeonhole_nesting: context mismatch");

  const int k = nesting_level_count(epsilon, k_bound);
  ElementSet a4 = power(a, 4);
  const std::size_t km = static_cast<std::size_t>(k) * static_cast<std::size_t>(m);
  // Stage-checked powering: the identity lies in B, so B^j grows with j and
  // every stage must already sit inside A^4. The first escaping stage names
  // the violated containment without ever computing a set much larger than
  // A^4; a budget overflow on the way certifies the escape as well, since
  // A^4 itself fit.
  ElementSet bm = b;
  ElementSet stage = b;
  std::optional<std::string> violation;
  try {
    for (std::size_t j = 1;; ++j) {
      if (auto missing = stage.first_missing_from(a4)) {
        violation = "pigeonhole_nesting: B^(km) is not contained in A^4: " +
                    element_to_string(*a.context(), *missing) + " in B^" +
                    std::to_string(j) + " escapes (km = " + std::to_string(km) +
                    ")";
        break;
      }
      if (j == static_cast<std::size_t>(m)) bm = stage;
      if (j == km) break;
      stage = product(stage, b);
    }
  } catch (const BudgetError&) {
    violation =
        "pigeonhole_nesting: B^(km) is not contained in A^4: an intermediate "
        "power already exceeds the element budget (km = " +
        std::to_string(km) + ")";
  }
  if (violation) throw InputError(*violation);
  ElementSet a5 = product(a4, a);
  Rational k4 = rational_pow(k_bound, 4);
  if (Rational(BigInt(a5.size())) > k4 * Rational(BigInt(a.size())))
    throw InputError("pigeonhole_nesting: |A^5| = " + std::to_string(a5.size()) +
                     " exceeds K^4 |A| = " +
                     format_rational(k4 * Rational(BigInt(a.size()))));

  NestingResult result;
  result.k = k;
  result.m = m;
  result.epsilon = epsilon;
  result.core_power_in_a4 = true;
  result.core_in_a4 = b.is_subset_of(a4);

  const Rational growth = Rational(1) + epsilon;
  ElementSet level = a;
  for (int j = 0; j < k; ++j) {
    ElementSet expanded = product(level, bm);
    if (Rational(BigInt(expanded.size())) <=
        growth * Rational(BigInt(level.size()))) {
      result.j = j;
      result.a_prime = level;
      result.a_prime_size = level.size();
      result.expanded_size = expanded.size();
      result.expansion = Rational(BigInt(expanded.size()), BigInt(level.size()));
      result.certified = true;
      return result;
    }
    level = std::move(expanded);
  }
  throw VerifyError(
      "pigeonhole_nesting: no admissible level found below k; this contradicts "
      "the pigeonhole bound and indicates a bug",
      "k = " + std::to_string(k));
}

// ---------------------------------------------------------------------------
// Samplers
// ---------------------------------------------------------------------------

namespace {

struct SplitMix {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // uniform in [0, n) by rejection; deterministic across platforms
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % n;
  }
};

std::vector<std::string> split_spec(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    auto colon = s.find(':', pos);
    if (colon == std::string::npos) {
      out.push_back(s.substr(pos));
      break;
    }
    out.push_back(s.substr(pos, colon - pos));
    pos = colon + 1;
  }
  return out;
}

int spec_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError(std::string("bad ") + what + " in sampler spec: " + s);
  }
}

}  // namespace

SetSampler SetSampler::parse(const ContextPtr& ctx, const std::string& spec,
                             std::uint64_t seed) {
  auto parts = split_spec(spec);
  SetSampler s(ctx, spec, seed);
  const std::string& head = parts[0];

  auto standard_ball = [&](int r) {
    ElementSet gens(ctx, ctx->standard_generators());
    return make_ball(ctx, gens, r);
  };

  if (head == "balls") {
    if (parts.size() != 2) throw InputError("sampler: balls:R");
    s.kind_ = Kind::Balls;
    s.radius_ = spec_int(parts[1], "radius");
    if (s.radius_ < 1) throw InputError("sampler: radius must be >= 1");
    for (int r = 1; r <= s.radius_; ++r) s.base_balls_.push_back(standard_ball(r));
    return s;
  }
  if (head == "intervals") {
    if (ctx->family() != Family::Abelian)
      throw InputError("intervals sampler needs a free abelian group");
    if (parts.size() != 2) throw InputError("sampler: intervals:N");
    s.kind_ = Kind::Intervals;
    s.radius_ = spec_int(parts[1], "interval bound");
    if (s.radius_ < 1) throw InputError("sampler: interval bound must be >= 1");
    return s;
  }
  if (head == "random" || head == "random-symmetric") {
    if (parts.size() != 3)
      throw InputError("sampler: " + head + ":r:maxsize");
    s.kind_ = head == "random" ? Kind::Random : Kind::RandomSymmetric;
    s.radius_ = spec_int(parts[1], "radius");
    int ms = spec_int(parts[2], "maxsize");
    if (ms < 1) throw InputError("sampler: maxsize must be >= 1");
    s.max_size_ = static_cast<std::size_t>(ms);
    if (ctx->family() == Family::Table) {
      std::vector<Element> all;
      for (int i = 0; i < ctx->table_order(); ++i)
        all.push_back(ctx->table_element(i));
      s.base_balls_.push_back(ElementSet(ctx, std::move(all)));
    } else {
      s.base_balls_.push_back(standard_ball(s.radius_));
    }
    return s;
  }
  if (head == "coset-unions") {
    if (parts.size() != 4)
      throw InputError("sampler: coset-unions:<oracle>:r:count");
    s.kind_ = Kind::CosetUnions;
    s.oracle_ = SubgroupOracle::parse(ctx, parts[1]);
    s.radius_ = spec_int(parts[2], "radius");
    s.count_ = spec_int(parts[3], "count");
    if (s.count_ < 1) throw InputError("sampler: count must be >= 1");
    s.base_balls_.push_back(standard_ball(s.radius_));
    return s;
  }
  throw InputError("unknown sampler: " + spec);
}

ElementSet SetSampler::sample(std::size_t trial) const {
  SplitMix rng{mix64(seed_ ^ (0x5851f42d4c957f2dULL * (trial + 1)))};
  switch (kind_) {
    case Kind::Balls:
      return base_balls_[trial % base_balls_.size()];
    case Kind::Intervals: {
      Int t = 1 + static_cast<Int>(trial % static_cast<std::size_t>(radius_));
      const int d = ctx_->rank();
      std::vector<Element> elems;
      std::vector<Int> coords(d, -t);
      while (true) {
        elems.push_back(ctx_->tuple(coords));
        int i = 0;
        while (i < d && coords[i] == t) coords[i++] = -t;
        if (i == d) break;
        ++coords[i];
      }
      return ElementSet(ctx_, std::move(elems));
    }
    case Kind::Random:
    case Kind::RandomSymmetric: {
      const ElementSet& pool = base_balls_[0];
      std::size_t want = 1 + rng.below(std::min(max_size_, pool.size()));
      std::vector<Element> elems;
      for (std::size_t i = 0; i < want; ++i)
        elems.push_back(pool[rng.below(pool.size())]);
      ElementSet out(ctx_, std::move(elems));
      if (kind_ == Kind::RandomSymmetric) out = symmetrize(out);
      return out;
    }
    case Kind::CosetUnions: {
      const ElementSet& pool = base_balls_[0];
      ElementSet base = intersect_coset(pool, *oracle_, ctx_->identity());
      ElementSet out = base;
      for (int c = 1; c < count_; ++c) {
        const Element& rep = pool[rng.below(pool.size())];
        std::vector<Element> shifted;
        for (const Element& e : base.elements())
          shifted.push_back(ctx_->mul(e, rep));
        out = out.unite(ElementSet(ctx_, std::move(shifted)));
      }
      return out;
    }
  }
  throw InputError("unknown sampler kind");
}

Rational kappa_probe(const ContextPtr& ctx, const ElementSet& x,
                     const SetSampler& sampler, int trials) {
  if (trials < 1) throw InputError("kappa_probe: trials must be >= 1");
  if (!ctx->same_group(*x.context()))
    throw InputError("kappa_probe: test set context mismatch");
  std::optional<Rational> best;
  for (int i = 0; i < trials; ++i) {
    ElementSet a = sampler.sample(static_cast<std::size_t>(i));
    if (a.empty()) continue;
    ElementSet ax = product(a, x);
    Rational v = Rational(BigInt(ax.size()), BigInt(a.size())) - 1;
    if (!best || v < *best) best = v;
  }
  if (!best) throw InputError("kappa_probe: sampler produced no nonempty sets");
  return *best;
}

// ---------------------------------------------------------------------------
// Core-set search
// ---------------------------------------------------------------------------

namespace {

// Family-generic size heuristic used to order pruning thresholds.
BigInt element_norm(const GroupContext& g, const Element& e) {
  switch (g.family()) {
    case Family::Free: {
      BigInt len = 0;
      for (Run r : e.int_span()) len += run_count(r);
      return len;
    }
    case Family::Abelian:
    case Family::Heisenberg: {
      BigInt n = 0;
      for (Int v : e.int_span()) {
        BigInt a = v < 0 ? BigInt(-(v + 1)) + 1 : BigInt(v);
        if (a > n) n = a;
      }
      return n;
    }
    case Family::Matrix: {
      BigInt n = 0;
      for (const Rational& r : e.matrix().entries) {
        BigInt p = numerator(r);
        if (p < 0) p = -p;
        BigInt q = denominator(r);
        if (p > n) n = p;
        if (q > n) n = q;
      }
      return n;
    }
    case Family::Table:
      return BigInt(e.ints()[0]);
  }
  return BigInt(0);
}

// Exact check B^(km) within A^4, powering stage by stage with early exit
// (each stage already must lie in A^4 since the identity is in B).
bool core_power_contained(const ElementSet& b, std::size_t km, const ElementSet& a4) {
  ElementSet acc = b;
  if (!acc.is_subset_of(a4)) return false;
  for (std::size_t i = 1; i < km; ++i) {
    acc = product(acc, b);
    if (!acc.is_subset_of(a4)) return false;
  }
  return true;
}

}  // namespace

std::optional<ElementSet> sanders_core_search(const ElementSet& a, int m, int k,
                                              std::size_t candidate_budget) {
  if (m < 1 || k < 1) throw InputError("sanders_core_search: m and k must be >= 1");
  const GroupContext& g = *a.context();
  const std::size_t km = static_cast<std::size_t>(m) * static_cast<std::size_t>(k);
  ElementSet a4 = power(a, 4);

  std::optional<ElementSet> best;
  std::size_t examined = 0;
  auto consider = [&](const ElementSet& cand) {
    if (examined >= candidate_budget) return;
    ++examined;
    if (cand.empty()) return;
    if (!cand.contains_identity() || !cand.is_symmetric()) return;
    if (best && cand.size() <= best->size()) return;  // cannot improve
    bool ok;
    try {
      ok = core_power_contained(cand, km, a4);
    } catch (const BudgetError&) {
      ok = false;  // candidate power blew the element budget; skip it
    } catch (const OverflowError&) {
      ok = false;
    }
    if (ok) best = cand;
  };

  // The identity core always works when e is in A^4.
  consider(ElementSet::single(a.context(), g.identity()));

  // Power intervals of cyclic subgroups generated from A.
  for (const Element& gen : a.elements()) {
    if (examined >= candidate_budget) break;
    if (g.is_identity(gen)) continue;
    std::size_t reach = 0;
    bool full_cycle = false;
    Element p = gen;
    const std::size_t walk_cap = std::max<std::size_t>(km * 64, 4096);
    while (a4.contains(p)) {
      ++reach;
      if (g.is_identity(p)) {
        full_cycle = true;
        break;
      }
      if (reach > walk_cap) break;
      p = g.mul(p, gen);
    }
    std::size_t t = full_cycle ? reach : reach / km;
    if (t < 1) continue;
    std::vector<Element> elems;
    elems.push_back(g.identity());
    Element fwd = gen;
    for (std::size_t i = 1; i <= t; ++i) {
      elems.push_back(fwd);
      elems.push_back(g.inv(fwd));
      if (i < t) fwd = g.mul(fwd, gen);
    }
    consider(ElementSet(a.context(), std::move(elems)));
  }

  // Intersections with the built-in subgroup oracles of the family.
  std::vector<std::string> oracle_specs;
  switch (g.family()) {
    case Family::Free:
      oracle_specs = {"all", "even-length"};
      break;
    case Family::Abelian:
      oracle_specs = {"all", "even-lattice:2", "even-lattice:3"};
      break;
    case Family::Heisenberg:
      oracle_specs = {"all", "center", "congruence:2"};
      break;
    case Family::Matrix:
      oracle_specs = {"all", "upper-triangular", "det-one"};
      break;
    case Family::Table:
      oracle_specs = {"all"};
      break;
  }
  for (const std::string& spec : oracle_specs) {
    if (examined >= candidate_budget) break;
    SubgroupOracle h = SubgroupOracle::parse(a.context(), spec);
    ElementSet in_h = intersect_coset(a, h, g.identity());
    consider(symmetrize(in_h));
  }

  // Norm-pruned symmetric subsets of A^2, smallest thresholds first
  // (containment failures are monotone in the threshold).
  ElementSet a2 = product(a, a);
  std::vector<std::pair<BigInt, std::size_t>> norms;
  norms.reserve(a2.size());
  for (std::size_t i = 0; i < a2.size(); ++i) {
    BigInt n = element_norm(g, a2[i]);
    BigInt ni = element_norm(g, g.inv(a2[i]));
    norms.emplace_back(n > ni ? n : ni, i);
  }
  std::vector<BigInt> thresholds;
  for (const auto& [n, i] : norms) thresholds.push_back(n);
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  for (const BigInt& t : thresholds) {
    if (examined >= candidate_budget) break;
    std::vector<Element> elems;
    elems.push_back(g.identity());
    for (const auto& [n, i] : norms)
      if (n <= t) elems.push_back(a2[i]);
    ElementSet cand(a.context(), std::move(elems));
    std::size_t before = best ? best->size() : 0;
    consider(cand);
    bool improved = best && best->size() > before;
    if (!improved && best && cand.size() > best->size()) break;  // escaped A^4
  }

  return best;
}

}  // namespace apx
