#include "apxgroups/pipeline.hpp"

#include "apxgroups/io.hpp"

namespace apx {

namespace {

constexpr const char* kExponentNote =
    "control step applies the subgroup-control construction with k = 4, as "
    "inferred from the A^4-coset concentration it measures; the asymptotic "
    "constants behind the concentration heuristic are recorded as measured "
    "ratios only";

// Best coset representative: x in B maximizing |B n Hx|, canonical-least
// among maximizers.
std::pair<Element, std::size_t> coset_concentration(const ElementSet& b,
                                                    const SubgroupOracle& h) {
  const GroupContext& g = *b.context();
  std::size_t best_count = 0;
  std::optional<Element> best;
  for (const Element& rep : b.elements()) {
    Element rep_inv = g.inv(rep);
    std::size_t count = 0;
    for (const Element& e : b.elements())
      if (h.contains(g.mul(e, rep_inv))) ++count;
    if (count > best_count) {
      best_count = count;
      best = rep;
    }
  }
  return {best.value(), best_count};
}

}  // namespace

PipelineTranscript run_pipeline(const ElementSet& a, const Rational& k_bound, int m,
                                const Rational& epsilon, const SubgroupOracle& h,
                                const std::optional<ElementSet>& user_core,
                                int length_bound) {
  if (m < 1) throw InputError("pipeline: m must be >= 1");
  if (length_bound < 1) throw InputError("pipeline: L must be >= 1");
  if (!a.context()->same_group(*h.context()))
    throw InputError("pipeline: subgroup oracle context mismatch");
  if (!a.contains_identity())
    throw InputError("pipeline: A must contain the identity");
  if (!a.is_symmetric()) throw InputError("pipeline: A must be symmetric");

  PipelineTranscript t;
  t.a = a;
  t.k_bound = k_bound;
  t.m = m;
  t.epsilon = epsilon;
  t.subgroup_spec = h.spec();
  t.length_bound = length_bound;
  t.note = kExponentNote;

  // Step 0: establish the approximate-group witness.
  auto witness = find_witness(a, k_bound);
  if (!witness) {
    throw InputError(
        "pipeline: greedy search found no witness of size <= " +
        format_rational(k_bound) +
        "; A is not verified as a K-approximate group at this bound");
  }
  t.witness = *witness;
  // All downstream constants are stated in terms of the declared bound K,
  // not the (possibly smaller) witness found.
  t.witness.k = k_bound;

  t.k_levels = nesting_level_count(epsilon, k_bound);
  t.von_neumann_applicable = epsilon <= Rational(1, 4);
  if (!t.von_neumann_applicable)
    t.warnings.push_back(
        "epsilon exceeds 1/4: the expansion consistency check against the "
        "5/4 bound is disabled");

  // Step 1: core set and pigeonhole nesting.
  if (user_core) {
    if (!user_core->context()->same_group(*a.context()))
      throw InputError("pipeline: core set context mismatch");
    t.core = *user_core;
    t.core_source = "user";
  } else {
    auto core = sanders_core_search(a, m, t.k_levels);
    if (!core) {
      t.failure = "core search found no admissible set (the identity itself "
                  "is outside A^4)";
      t.outcome = PipelineOutcome::Inconclusive;
      return t;
    }
    t.core = *core;
    t.core_source = "auto";
  }

  try {
    t.nesting = pigeonhole_nesting(a, t.core, m, epsilon, k_bound);
  } catch (const InputError& e) {
    t.failure = std::string("nesting preconditions failed: ") + e.what();
    t.outcome = PipelineOutcome::Inconclusive;
    return t;
  }

  // Step 2: scan B^m for a certified free pair.
  t.free_pair = free_pair_search(t.core, m, length_bound);
  if (t.free_pair) {
    if (t.von_neumann_applicable &&
        t.free_pair->certificate.mode == FreenessMode::PingPong &&
        t.nesting->expansion < Rational(5, 4)) {
      throw VerifyError(
          "pipeline: a ping-pong certified free pair lies in B^m while "
          "|A'B^m| < (5/4)|A'|; these are mutually inconsistent and indicate "
          "a bug",
          "expansion = " + format_rational(t.nesting->expansion));
    }
    t.outcome = PipelineOutcome::FreePairFound;
    if (t.free_pair->certificate.mode == FreenessMode::NoRelationUpTo)
      t.warnings.push_back(
          "the free pair is certified only up to relations of length " +
          std::to_string(t.free_pair->certificate.length_bound) +
          "; this is falsifiable evidence, not a proof of freeness");
    return t;
  }

  // Step 3: coset concentration of the core.
  auto [rep, count] = coset_concentration(t.core, h);
  t.coset_rep = rep;
  t.core_coset_count = count;
  ElementSet a4 = power(a, 4);
  ElementSet a4_coset = intersect_coset(a4, h, rep);
  t.a4_coset_count = a4_coset.size();
  t.delta_prime = Rational(BigInt(a4_coset.size()), BigInt(a.size()));
  if (t.nesting->core_in_a4 && t.a4_coset_count < t.core_coset_count)
    throw VerifyError(
        "pipeline: |A^4 n Hx| < |B n Hx| although B lies in A^4; this "
        "indicates a bug",
        std::to_string(t.a4_coset_count) + " < " + std::to_string(t.core_coset_count));

  // Step 4: subgroup control with k = 4.
  try {
    t.control = subgroup_control(a, t.witness, h, rep, 4);
  } catch (const InputError& e) {
    t.failure = std::string("subgroup control failed: ") + e.what();
    t.outcome = PipelineOutcome::Inconclusive;
    return t;
  }
  t.outcome = PipelineOutcome::ControlledBySubgroupSet;
  return t;
}

TranscriptCheck verify_transcript(const PipelineTranscript& t) {
  auto fail = [](std::string detail) {
    return TranscriptCheck{false, std::move(detail)};
  };
  const ContextPtr& ctx = t.a.context();

  SubgroupOracle h = SubgroupOracle::parse(ctx, t.subgroup_spec);
  if (!t.a.contains_identity()) return fail("A lacks the identity");
  if (!t.a.is_symmetric()) return fail("A is not symmetric");
  if (auto bad = check_approx(t.a, t.witness.x, t.k_bound))
    return fail("witness: " + *bad);

  int k_levels;
  try {
    k_levels = nesting_level_count(t.epsilon, t.k_bound);
  } catch (const Error& e) {
    return fail(std::string("level count: ") + e.what());
  }
  if (k_levels != t.k_levels)
    return fail("recorded k_levels " + std::to_string(t.k_levels) +
                " differs from recomputed " + std::to_string(k_levels));
  if (t.von_neumann_applicable != (t.epsilon <= Rational(1, 4)))
    return fail("von_neumann_applicable flag is wrong");

  if (t.failure) {
    if (t.outcome != PipelineOutcome::Inconclusive)
      return fail("a failed transcript must be inconclusive");
    return TranscriptCheck{true, "inconclusive transcript; recorded failure: " +
                                     *t.failure};
  }

  if (!t.nesting) return fail("missing nesting record");
  NestingResult nest;
  try {
    nest = pigeonhole_nesting(t.a, t.core, t.m, t.epsilon, t.k_bound);
  } catch (const Error& e) {
    return fail(std::string("nesting re-run failed: ") + e.what());
  }
  if (nest.j != t.nesting->j || nest.k != t.nesting->k ||
      nest.a_prime_size != t.nesting->a_prime_size ||
      nest.expanded_size != t.nesting->expanded_size ||
      nest.expansion != t.nesting->expansion ||
      nest.core_in_a4 != t.nesting->core_in_a4 ||
      nest.core_power_in_a4 != t.nesting->core_power_in_a4)
    return fail("nesting record differs from exact recomputation");
  // A is within A' is within A^5, both checked exactly.
  if (auto missing = t.a.first_missing_from(nest.a_prime))
    return fail("A is not contained in A': missing " +
                element_to_string(*ctx, *missing));
  if (auto missing = nest.a_prime.first_missing_from(power(t.a, 5)))
    return fail("A' is not contained in A^5: missing " +
                element_to_string(*ctx, *missing));

  if (t.outcome == PipelineOutcome::FreePairFound) {
    if (!t.free_pair) return fail("free-pair outcome without a pair");
    const FreePairResult& fp = *t.free_pair;
    ElementSet bm = power(t.core, t.m);
    if (!bm.contains(fp.a) || !bm.contains(fp.b))
      return fail("free pair is not inside B^m");
    if (fp.certificate.mode == FreenessMode::PingPong) {
      auto cert = pingpong_certify(ctx, fp.a, fp.b);
      if (!cert) return fail("ping-pong certificate does not re-verify");
      if (cert->t != fp.certificate.t || cert->s != fp.certificate.s)
        return fail("ping-pong certificate entries differ");
    } else {
      auto out = no_relation_check(ctx, fp.a, fp.b, fp.certificate.length_bound);
      auto* cert = std::get_if<FreenessCertificate>(&out);
      if (!cert) return fail("no-relation certificate is falsified on re-check");
      if (cert->words_checked != fp.certificate.words_checked)
        return fail("no-relation word count differs on re-check");
    }
    return TranscriptCheck{true, ""};
  }

  if (t.outcome == PipelineOutcome::ControlledBySubgroupSet) {
    if (t.free_pair) return fail("controlled outcome records a free pair");
    if (!t.coset_rep || !t.control) return fail("missing coset or control record");
    auto [rep, count] = coset_concentration(t.core, h);
    if (!(rep == *t.coset_rep) || count != t.core_coset_count)
      return fail("coset concentration differs from recomputation");
    ElementSet a4 = power(t.a, 4);
    ElementSet a4_coset = intersect_coset(a4, h, rep);
    if (a4_coset.size() != t.a4_coset_count)
      return fail("recorded |A^4 n Hx| differs from recomputation");
    Rational delta_prime(BigInt(a4_coset.size()), BigInt(t.a.size()));
    if (delta_prime != t.delta_prime) return fail("delta' differs");

    const SubgroupControlResult& c = *t.control;
    ElementSet a2 = product(t.a, t.a);
    ElementSet b = intersect_coset(a2, h, ctx->identity());
    if (!(b.is_subset_of(c.b) && c.b.is_subset_of(b)))
      return fail("recorded B differs from recomputed A^2 n H");
    if (c.k != 4) return fail("control step must use k = 4");
    ElementSet ak = power(t.a, c.k);
    ElementSet ak_coset = intersect_coset(ak, h, rep);
    Rational delta(BigInt(ak_coset.size()), BigInt(t.a.size()));
    if (delta != c.delta) return fail("recorded delta differs from recomputation");
    Rational expect_b_bound = Rational(2) * rational_pow(t.k_bound, 3);
    if (c.b_witness.k != expect_b_bound)
      return fail("B-witness bound is not 2K^3");
    if (auto bad = check_approx(c.b, c.b_witness.x, c.b_witness.k))
      return fail("B witness: " + *bad);
    Rational expect_ctl = Rational(2) * rational_pow(t.k_bound, 2 * c.k + 4) / delta;
    if (c.control.k != expect_ctl)
      return fail("control bound is not 2K^(2k+4)/delta");
    ControlWitness cw{t.a, c.b, c.control.x, c.control.k};
    if (auto bad = check_control(t.a, cw)) return fail("control witness: " + *bad);
    return TranscriptCheck{true, ""};
  }

  return fail("inconclusive outcome without a recorded failure");
}

}  // namespace apx
