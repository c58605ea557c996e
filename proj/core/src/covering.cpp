#include "apxgroups/covering.hpp"

#include <algorithm>
#include <unordered_set>

#include "apxgroups/io.hpp"

namespace apx {

namespace {

std::string describe_element(const GroupContext& g, const Element& e);

void require_symmetric_with_identity(const ElementSet& a, const char* who) {
  if (!a.contains_identity())
    throw InputError(std::string(who) + ": the set must contain the identity");
  if (!a.is_symmetric())
    throw InputError(std::string(who) + ": the set must be symmetric");
}

}  // namespace

ElementSet inverse_set(const ElementSet& s) {
  const GroupContext& g = *s.context();
  std::vector<Element> out;
  out.reserve(s.size());
  for (const Element& e : s.elements()) out.push_back(g.inv(e));
  return ElementSet(s.context(), std::move(out));
}

// ---------------------------------------------------------------------------
// Checks
// ---------------------------------------------------------------------------

std::optional<std::string> check_approx(const ElementSet& a, const ElementSet& x,
                                        const Rational& k) {
  require_symmetric_with_identity(a, "approximate-group check");
  if (!a.context()->same_group(*x.context()))
    throw InputError("witness set lives in a different group");
  if (!x.is_symmetric()) return std::string("witness set X is not symmetric");
  if (Rational(BigInt(x.size())) > k)
    return "witness too large: |X| = " + std::to_string(x.size()) + " > K = " +
           format_rational(k);
  ElementSet a2 = product(a, a);
  ElementSet ax = product(a, x);
  if (auto missing = a2.first_missing_from(ax))
    return "A^2 not covered: " + element_to_string(*a.context(), *missing) +
           " is not in A*X";
  return std::nullopt;
}

bool verify_approx(const ElementSet& a, const ElementSet& x, const Rational& k) {
  return !check_approx(a, x, k).has_value();
}

std::optional<std::string> check_control(const ElementSet& a, const ControlWitness& w) {
  if (!a.context()->same_group(*w.b.context()) ||
      !a.context()->same_group(*w.x.context()))
    throw InputError("control witness lives in a different group");
  if (Rational(BigInt(w.b.size())) > w.k * Rational(BigInt(a.size())))
    return "|B| = " + std::to_string(w.b.size()) + " exceeds K|A| = " +
           format_rational(w.k * Rational(BigInt(a.size())));
  if (Rational(BigInt(w.x.size())) > w.k)
    return "|X| = " + std::to_string(w.x.size()) + " exceeds K = " +
           format_rational(w.k);
  ElementSet bx = product(w.b, w.x);
  if (auto missing = a.first_missing_from(bx))
    return "A not covered on the right: " +
           element_to_string(*a.context(), *missing) + " is not in B*X";
  ElementSet xb = product(w.x, w.b);
  if (auto missing = a.first_missing_from(xb))
    return "A not covered on the left: " +
           element_to_string(*a.context(), *missing) + " is not in X*B";
  return std::nullopt;
}

bool verify_control(const ElementSet& a, const ControlWitness& w) {
  return !check_control(a, w).has_value();
}

std::optional<std::string> check_cover(const CoverCertificate& c) {
  if (auto missing = c.x.first_missing_from(c.s))
    return "center " + element_to_string(*c.s.context(), *missing) +
           " is not in S";
  // pairwise disjointness of {x*T}: total size must be |X| * |T|
  ElementSet xt = product(c.x, c.t);
  if (xt.size() != c.x.size() * c.t.size())
    return "translates overlap: |X*T| = " + std::to_string(xt.size()) +
           " < |X||T| = " + std::to_string(c.x.size() * c.t.size());
  ElementSet xtt = product(xt, inverse_set(c.t));
  if (auto missing = c.s.first_missing_from(xtt))
    return "S not covered: " + element_to_string(*c.s.context(), *missing) +
           " is not in X*T*T^-1";
  ElementSet st = product(c.s, c.t);
  Rational bound(BigInt(st.size()), BigInt(c.t.size()));
  if (Rational(BigInt(c.x.size())) > bound)
    return "|X| = " + std::to_string(c.x.size()) + " exceeds |ST|/|T| = " +
           format_rational(bound);
  if (bound != c.ratio_bound)
    return "recorded ratio bound " + format_rational(c.ratio_bound) +
           " differs from recomputed " + format_rational(bound);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Greedy witness search
// ---------------------------------------------------------------------------

namespace {

// Symmetric orbits {x, x^-1} of the pool, in canonical order of their
// smaller representative.
struct Orbit {
  Element rep;
  Element partner;
  bool paired;
};

std::vector<Orbit> pool_orbits(const ElementSet& pool) {
  const GroupContext& g = *pool.context();
  std::vector<Orbit> orbits;
  std::unordered_set<Element, ElementHash> used;
  for (const Element& e : pool.elements()) {
    if (used.count(e)) continue;
    Element einv = g.inv(e);
    used.insert(e);
    if (einv == e) {
      orbits.push_back({e, e, false});
    } else {
      used.insert(einv);
      orbits.push_back({e, einv, true});
    }
  }
  return orbits;  // pool is canonically sorted, so orbits are too
}

}  // namespace

std::optional<ApproxWitness> find_witness(const ElementSet& a, const Rational& k_max,
                                          const std::optional<ElementSet>& pool_opt) {
  require_symmetric_with_identity(a, "find_witness");
  const GroupContext& g = *a.context();
  ElementSet a2 = product(a, a);
  ElementSet pool = pool_opt.value_or(a2);
  if (!pool.context()->same_group(g)) throw InputError("pool context mismatch");

  std::vector<Orbit> orbits = pool_orbits(pool);
  std::vector<char> used(orbits.size(), 0);

  // Coverage bookkeeping over the target A^2, by index.
  std::vector<char> covered(a2.size(), 0);
  std::size_t remaining = a2.size();
  auto index_of = [&](const Element& e) -> std::ptrdiff_t {
    const auto& v = a2.elements();
    auto it = std::lower_bound(v.begin(), v.end(), e,
                               [&g](const Element& p, const Element& q) {
                                 return g.compare(p, q) < 0;
                               });
    if (it != v.end() && *it == e) return it - v.begin();
    return -1;
  };

  std::vector<Element> witness;
  std::vector<std::ptrdiff_t> touched;
  while (remaining > 0) {
    std::size_t best = orbits.size();
    std::size_t best_gain = 0;
    for (std::size_t oi = 0; oi < orbits.size(); ++oi) {
      if (used[oi]) continue;
      std::size_t orbit_size = orbits[oi].paired ? 2 : 1;
      if (Rational(BigInt(witness.size() + orbit_size)) > k_max) continue;
      std::size_t gain = 0;
      touched.clear();
      for (const Element& s : a.elements()) {
        for (int side = 0; side < (orbits[oi].paired ? 2 : 1); ++side) {
          const Element& c = side == 0 ? orbits[oi].rep : orbits[oi].partner;
          std::ptrdiff_t idx = index_of(g.mul(s, c));
          if (idx >= 0 && !covered[idx]) {
            covered[idx] = 2;  // provisional mark to avoid double counting
            touched.push_back(idx);
            ++gain;
          }
        }
      }
      for (std::ptrdiff_t idx : touched) covered[idx] = 0;
      if (gain > best_gain) {
        best_gain = gain;
        best = oi;
      }
    }
    if (best == orbits.size() || best_gain == 0) return std::nullopt;
    used[best] = 1;
    witness.push_back(orbits[best].rep);
    if (orbits[best].paired) witness.push_back(orbits[best].partner);
    for (const Element& s : a.elements()) {
      for (int side = 0; side < (orbits[best].paired ? 2 : 1); ++side) {
        const Element& c = side == 0 ? orbits[best].rep : orbits[best].partner;
        std::ptrdiff_t idx = index_of(g.mul(s, c));
        if (idx >= 0 && !covered[idx]) {
          covered[idx] = 1;
          --remaining;
        }
      }
    }
  }

  ApproxWitness w{a, ElementSet(a.context(), std::move(witness)),
                  Rational(BigInt(0)), false};
  w.k = Rational(BigInt(w.x.size()));
  w.verified = verify_approx(a, w.x, w.k);
  if (!w.verified)
    throw VerifyError("greedy witness failed re-verification",
                      check_approx(a, w.x, w.k).value_or(""));
  return w;
}

std::optional<ApproxWitness> find_witness_exhaustive(
    const ElementSet& a, const Rational& k_max,
    const std::optional<ElementSet>& pool_opt, std::size_t max_pool_orbits,
    std::size_t max_size) {
  require_symmetric_with_identity(a, "find_witness_exhaustive");
  const GroupContext& g = *a.context();
  ElementSet a2 = product(a, a);
  ElementSet pool = pool_opt.value_or(a2);
  std::vector<Orbit> orbits = pool_orbits(pool);
  if (orbits.size() > max_pool_orbits)
    throw InputError("exhaustive witness search: pool has " +
                     std::to_string(orbits.size()) + " orbits, limit is " +
                     std::to_string(max_pool_orbits));

  std::size_t size_cap = max_size;
  if (Rational(BigInt(size_cap)) > k_max) {
    // shrink to floor(k_max)
    BigInt fl = numerator(k_max) / denominator(k_max);
    size_cap = static_cast<std::size_t>(fl < 0 ? 0 : fl.convert_to<std::size_t>());
  }

  std::vector<std::size_t> chosen;
  std::vector<Element> elems;
  // Depth-first over orbit combinations in canonical order; first hit at each
  // target size is the lexicographically least witness of that size.
  std::function<bool(std::size_t, std::size_t)> dfs = [&](std::size_t start,
                                                          std::size_t want) {
    if (want == 0) {
      ElementSet x(a.context(), elems);
      return verify_approx(a, x, Rational(BigInt(x.size())));
    }
    for (std::size_t oi = start; oi < orbits.size(); ++oi) {
      std::size_t osz = orbits[oi].paired ? 2 : 1;
      if (osz > want) continue;
      elems.push_back(orbits[oi].rep);
      if (orbits[oi].paired) elems.push_back(orbits[oi].partner);
      chosen.push_back(oi);
      if (dfs(oi + 1, want - osz)) return true;
      chosen.pop_back();
      elems.pop_back();
      if (orbits[oi].paired) elems.pop_back();
    }
    return false;
  };

  for (std::size_t target = 0; target <= size_cap; ++target) {
    elems.clear();
    chosen.clear();
    if (dfs(0, target)) {
      ApproxWitness w{a, ElementSet(a.context(), elems),
                      Rational(BigInt(elems.size())), true};
      return w;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Ruzsa covering
// ---------------------------------------------------------------------------

CoverCertificate ruzsa_cover(const ElementSet& s, const ElementSet& t) {
  if (s.empty() || t.empty()) throw InputError("ruzsa_cover: S and T must be nonempty");
  if (!s.context()->same_group(*t.context()))
    throw InputError("ruzsa_cover: context mismatch");
  const GroupContext& g = *s.context();

  std::unordered_set<Element, ElementHash> occupied;
  std::vector<Element> centers;
  std::vector<Element> translate;
  translate.reserve(t.size());
  for (const Element& cand : s.elements()) {
    translate.clear();
    bool disjoint = true;
    for (const Element& u : t.elements()) {
      Element p = g.mul(cand, u);
      if (occupied.count(p)) {
        disjoint = false;
        break;
      }
      translate.push_back(std::move(p));
    }
    if (!disjoint) continue;
    for (Element& p : translate) occupied.insert(std::move(p));
    centers.push_back(cand);
  }

  CoverCertificate cert;
  cert.s = s;
  cert.t = t;
  cert.x = ElementSet(s.context(), std::move(centers));
  ElementSet st = product(s, t);
  cert.ratio_bound = Rational(BigInt(st.size()), BigInt(t.size()));
  auto fail = check_cover(cert);
  cert.covered = !fail.has_value();
  cert.disjointness_checked = true;
  if (fail)
    throw VerifyError("ruzsa_cover produced an invalid certificate", *fail);
  return cert;
}

// ---------------------------------------------------------------------------
// Subgroup control
// ---------------------------------------------------------------------------

SubgroupControlResult subgroup_control(const ElementSet& a,
                                       const ApproxWitness& witness_a,
                                       const SubgroupOracle& h, const Element& x,
                                       int k) {
  if (k < 1) throw InputError("subgroup_control: k must be >= 1");
  const GroupContext& g = *a.context();
  g.validate(x);
  if (auto fail = check_approx(a, witness_a.x, witness_a.k))
    throw InputError("subgroup_control: the supplied witness does not verify: " + *fail);
  const Rational& K = witness_a.k;

  ElementSet ak = power(a, k);
  ElementSet coset = intersect_coset(ak, h, x);
  if (coset.empty())
    throw InputError("subgroup_control: A^" + std::to_string(k) +
                     " does not meet the coset Hx (delta = 0)");
  Rational delta(BigInt(coset.size()), BigInt(a.size()));

  ElementSet a2 = product(a, a);
  ElementSet b = intersect_coset(a2, h, g.identity());  // A^2 n H

  // Approximate-group witness for B. A^4 is covered by A * X^3; pick, for
  // each w in X^3 whose translate Aw meets H, one element h_w of Aw n H.
  // Every element of A^4 n H (so in particular of B^2) then lands in B*h_w,
  // and the symmetrized set of chosen elements witnesses the 2K^3 bound.
  ElementSet w3 = power(witness_a.x, 3);
  std::vector<Element> chosen;
  for (const Element& w : w3.elements()) {
    bool found = false;
    Element best;
    for (const Element& s : a.elements()) {
      Element p = g.mul(s, w);
      if (!h.contains(p)) continue;
      if (!found || g.compare(p, best) < 0) {
        best = p;
        found = true;
      }
    }
    if (found) chosen.push_back(best);
  }
  ElementSet h_reps(a.context(), chosen);
  ElementSet xb = h_reps.unite(inverse_set(h_reps));
  Rational approx_bound = Rational(2) * rational_pow(K, 3);
  if (Rational(BigInt(xb.size())) > approx_bound)
    throw VerifyError("subgroup_control: constructed witness too large",
                      "|X_B| = " + std::to_string(xb.size()) + " > 2K^3 = " +
                          format_rational(approx_bound));
  ApproxWitness bw{b, xb, approx_bound, false};
  if (auto fail = check_approx(b, xb, approx_bound))
    throw VerifyError("subgroup_control: B witness failed its exact check", *fail);
  bw.verified = true;

  // Control witness via the covering certificate on (A, B): A lies in
  // X_c * B^2, and B^2 lies in both B*H_D and H_D^-1*B, so the union
  // (X_c * H_D^-1) u (H_D * X_c^-1) covers A on both sides of B.
  CoverCertificate cover = ruzsa_cover(a, b);
  ElementSet reps_inv = inverse_set(h_reps);
  ElementSet x_left = product(cover.x, reps_inv);
  ElementSet x_right = product(h_reps, inverse_set(cover.x));
  ControlWitness cw{a, b, x_left.unite(x_right),
                    Rational(2) * rational_pow(K, 2 * k + 4) / delta};
  if (auto fail = check_control(a, cw))
    throw VerifyError("subgroup_control: control witness failed its exact check",
                      *fail);

  SubgroupControlResult out{std::move(b), std::move(bw), std::move(cw), delta, k};
  return out;
}

SubgroupControlResult subgroup_control(const ElementSet& a, const Rational& k_bound,
                                       const SubgroupOracle& h, const Element& x,
                                       int k) {
  auto w = find_witness(a, k_bound);
  if (!w)
    throw InputError(
        "subgroup_control: greedy search found no witness of size <= " +
        format_rational(k_bound));
  return subgroup_control(a, *w, h, x, k);
}

}  // namespace apx
