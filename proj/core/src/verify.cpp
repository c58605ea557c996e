#include <nlohmann/json.hpp>

#include "apxgroups/io.hpp"

namespace apx {

namespace {

const Json& jfield(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw InputError(std::string("missing field \"") + key + "\"");
  return *it;
}

Rational jrational(const Json& j, const char* key) {
  const Json& v = jfield(j, key);
  if (v.is_number_integer()) return Rational(BigInt(v.get<long long>()));
  return parse_rational(v.get<std::string>());
}

}  // namespace

// ---------------------------------------------------------------------------
// Report builders
// ---------------------------------------------------------------------------

Json doubling_report_json(const ElementSet& s) {
  Rational ratio = doubling_constant(s);
  ElementSet sq = product(s, s);
  Json j;
  j["type"] = "doubling-report";
  j["group"] = group_to_json(*s.context());
  j["set"] = elements_to_json(s);
  j["size"] = s.size();
  j["square_size"] = sq.size();
  j["ratio"] = format_rational(ratio);
  j["approx"] = decimal_approx(ratio);
  return j;
}

Json expansion_report_json(const ElementSet& a, const ElementSet& x,
                           const std::string& source) {
  ExpansionReport r = expansion_ratio(a, x, source);
  Json j;
  j["type"] = "expansion-report";
  j["group"] = group_to_json(*a.context());
  j["set"] = elements_to_json(a);
  j["test_set"] = elements_to_json(x);
  j["test_set_source"] = r.test_set_source;
  j["a_size"] = r.a_size;
  j["ax_size"] = r.ax_size;
  j["ratio"] = format_rational(r.ratio);
  j["approx"] = decimal_approx(r.ratio);
  if (x.contains_identity()) {
    j["von_neumann_applicable"] = true;
    j["von_neumann_pass"] = r.ratio >= Rational(5, 4);
  } else {
    j["von_neumann_applicable"] = false;
  }
  return j;
}

Json nesting_report_json(const ElementSet& a, const ElementSet& b,
                         const NestingResult& r, const Rational& k_bound) {
  Json j;
  j["type"] = "nesting-report";
  j["group"] = group_to_json(*a.context());
  j["set"] = elements_to_json(a);
  j["core"] = elements_to_json(b);
  j["m"] = r.m;
  j["epsilon"] = format_rational(r.epsilon);
  j["K"] = format_rational(k_bound);
  j["k"] = r.k;
  j["j"] = r.j;
  j["a_prime_size"] = r.a_prime_size;
  j["expanded_size"] = r.expanded_size;
  j["expansion"] = format_rational(r.expansion);
  j["expansion_approx"] = decimal_approx(r.expansion);
  j["core_in_a4"] = r.core_in_a4;
  j["core_power_in_a4"] = r.core_power_in_a4;
  j["certified"] = r.certified;
  return j;
}

Json kappa_report_json(const ContextPtr& ctx, const ElementSet& x,
                       const SetSampler& sampler, int trials, const Rational& value) {
  Json j;
  j["type"] = "kappa-report";
  j["group"] = group_to_json(*ctx);
  j["test_set"] = elements_to_json(x);
  j["sampler"] = sampler.spec();
  j["seed"] = sampler.seed();
  j["trials"] = trials;
  j["kappa_upper_bound"] = format_rational(value);
  j["approx"] = decimal_approx(value);
  return j;
}

Json free_pair_report_json(const ElementSet& a, int m, int length_bound,
                           const std::optional<FreePairResult>& result) {
  Json j;
  j["type"] = "free-pair-report";
  j["group"] = group_to_json(*a.context());
  j["set"] = elements_to_json(a);
  j["m"] = m;
  j["L"] = length_bound;
  j["found"] = result.has_value();
  if (result) {
    j["certificate"] = freeness_certificate_to_json(a.context(), result->certificate);
    j["inconclusive"] = result->certificate.mode == FreenessMode::NoRelationUpTo;
  } else {
    j["certificate"] = nullptr;
    j["inconclusive"] = true;
  }
  return j;
}

// ---------------------------------------------------------------------------
// verify_document
// ---------------------------------------------------------------------------

namespace {

std::optional<std::string> verify_set_doc(const Json& j) {
  ElementSet s = set_from_json(j);
  Json round = set_to_json(s);
  if (!(jfield(j, "elements") == round["elements"]))
    return std::string(
        "set file is not in canonical form (ordering, duplicates, or "
        "non-canonical payloads)");
  return std::nullopt;
}

std::optional<std::string> verify_approx_doc(const Json& j) {
  ApproxWitness w = approx_witness_from_json(j);
  if (auto bad = check_approx(w.base, w.x, w.k)) return bad;
  if (!w.verified) return std::string("witness checks but is marked unverified");
  return std::nullopt;
}

std::optional<std::string> verify_control_doc(const Json& j) {
  ControlWitness w = control_witness_from_json(j);
  return check_control(w.base, w);
}

std::optional<std::string> verify_cover_doc(const Json& j) {
  CoverCertificate c = cover_certificate_from_json(j);
  if (!c.covered || !c.disjointness_checked)
    return std::string("certificate flags are not set");
  return check_cover(c);
}

std::optional<std::string> verify_subgroup_control_doc(const Json& j) {
  ContextPtr ctx = group_from_json(jfield(j, "group"));
  ElementSet a = elements_from_json(ctx, jfield(j, "set"));
  SubgroupOracle h = SubgroupOracle::parse(ctx, jfield(j, "subgroup").get<std::string>());
  Element x = element_from_json(*ctx, jfield(j, "x"));
  int k = jfield(j, "k").get<int>();
  ElementSet b = elements_from_json(ctx, jfield(j, "b"));
  ElementSet bw = elements_from_json(ctx, jfield(j, "b_witness"));
  Rational bw_bound = jrational(j, "b_witness_bound");
  ElementSet cx = elements_from_json(ctx, jfield(j, "control_x"));
  Rational ctl_bound = jrational(j, "control_bound");
  Rational delta = jrational(j, "delta");

  ElementSet b_re = intersect_coset(product(a, a), h, ctx->identity());
  if (!(b_re.is_subset_of(b) && b.is_subset_of(b_re)))
    return std::string("B is not A^2 n H");
  ElementSet ak_coset = intersect_coset(power(a, k), h, x);
  if (ak_coset.empty()) return std::string("A^k misses the coset Hx");
  Rational delta_re(BigInt(ak_coset.size()), BigInt(a.size()));
  if (delta_re != delta) return std::string("recorded delta is wrong");
  if (auto bad = check_approx(b, bw, bw_bound))
    return "B witness: " + *bad;
  ControlWitness cw{a, b, cx, ctl_bound};
  if (auto bad = check_control(a, cw)) return "control witness: " + *bad;
  return std::nullopt;
}

std::optional<std::string> verify_doubling_doc(const Json& j) {
  ElementSet s = elements_from_json(group_from_json(jfield(j, "group")),
                                    jfield(j, "set"));
  ElementSet sq = product(s, s);
  if (jfield(j, "size").get<std::size_t>() != s.size())
    return std::string("recorded size is wrong");
  if (jfield(j, "square_size").get<std::size_t>() != sq.size())
    return std::string("recorded square size is wrong");
  Rational ratio(BigInt(sq.size()), BigInt(s.size()));
  if (jrational(j, "ratio") != ratio) return std::string("recorded ratio is wrong");
  return std::nullopt;
}

std::optional<std::string> verify_expansion_doc(const Json& j) {
  ContextPtr ctx = group_from_json(jfield(j, "group"));
  ElementSet a = elements_from_json(ctx, jfield(j, "set"));
  ElementSet x = elements_from_json(ctx, jfield(j, "test_set"));
  ExpansionReport r = expansion_ratio(a, x);
  if (jfield(j, "a_size").get<std::size_t>() != r.a_size ||
      jfield(j, "ax_size").get<std::size_t>() != r.ax_size)
    return std::string("recorded sizes are wrong");
  if (jrational(j, "ratio") != r.ratio) return std::string("recorded ratio is wrong");
  bool applicable = x.contains_identity();
  if (jfield(j, "von_neumann_applicable").get<bool>() != applicable)
    return std::string("von Neumann applicability flag is wrong");
  if (applicable &&
      jfield(j, "von_neumann_pass").get<bool>() != (r.ratio >= Rational(5, 4)))
    return std::string("von Neumann verdict is wrong");
  return std::nullopt;
}

std::optional<std::string> verify_nesting_doc(const Json& j) {
  ContextPtr ctx = group_from_json(jfield(j, "group"));
  ElementSet a = elements_from_json(ctx, jfield(j, "set"));
  ElementSet b = elements_from_json(ctx, jfield(j, "core"));
  int m = jfield(j, "m").get<int>();
  Rational epsilon = jrational(j, "epsilon");
  Rational k_bound = jrational(j, "K");
  NestingResult r;
  try {
    r = pigeonhole_nesting(a, b, m, epsilon, k_bound);
  } catch (const Error& e) {
    return std::string("nesting re-run failed: ") + e.what();
  }
  if (jfield(j, "k").get<int>() != r.k || jfield(j, "j").get<int>() != r.j)
    return std::string("recorded levels are wrong");
  if (jfield(j, "a_prime_size").get<std::size_t>() != r.a_prime_size ||
      jfield(j, "expanded_size").get<std::size_t>() != r.expanded_size)
    return std::string("recorded sizes are wrong");
  if (jrational(j, "expansion") != r.expansion)
    return std::string("recorded expansion is wrong");
  if (jfield(j, "core_in_a4").get<bool>() != r.core_in_a4 ||
      jfield(j, "core_power_in_a4").get<bool>() != r.core_power_in_a4)
    return std::string("recorded containment flags are wrong");
  return std::nullopt;
}

std::optional<std::string> verify_kappa_doc(const Json& j) {
  ContextPtr ctx = group_from_json(jfield(j, "group"));
  ElementSet x = elements_from_json(ctx, jfield(j, "test_set"));
  SetSampler sampler = SetSampler::parse(ctx, jfield(j, "sampler").get<std::string>(),
                                         jfield(j, "seed").get<std::uint64_t>());
  int trials = jfield(j, "trials").get<int>();
  Rational v = kappa_probe(ctx, x, sampler, trials);
  if (jrational(j, "kappa_upper_bound") != v)
    return std::string("recorded probe value is wrong");
  return std::nullopt;
}

std::optional<std::string> verify_free_pair_doc(const Json& j) {
  ContextPtr ctx = group_from_json(jfield(j, "group"));
  ElementSet a = elements_from_json(ctx, jfield(j, "set"));
  int m = jfield(j, "m").get<int>();
  int length_bound = jfield(j, "L").get<int>();
  auto result = free_pair_search(a, m, length_bound);
  bool found = jfield(j, "found").get<bool>();
  if (found != result.has_value())
    return std::string("search re-run disagrees about finding a pair");
  if (!result) return std::nullopt;
  Json recomputed = freeness_certificate_to_json(ctx, result->certificate);
  if (jfield(j, "certificate") != recomputed)
    return std::string("recorded certificate differs from re-run");
  return std::nullopt;
}

}  // namespace

std::optional<std::string> verify_document(const Json& j) {
  if (!j.is_object()) return std::string("document is not a JSON object");
  std::string type;
  if (j.contains("type"))
    type = j["type"].get<std::string>();
  else if (j.contains("group") && j.contains("elements"))
    type = "set";
  else
    return std::string("document has no \"type\" field");

  if (type == "set") return verify_set_doc(j);
  if (type == "approx-witness") return verify_approx_doc(j);
  if (type == "control-witness") return verify_control_doc(j);
  if (type == "cover-certificate") return verify_cover_doc(j);
  if (type == "subgroup-control") return verify_subgroup_control_doc(j);
  if (type == "doubling-report") return verify_doubling_doc(j);
  if (type == "expansion-report") return verify_expansion_doc(j);
  if (type == "nesting-report") return verify_nesting_doc(j);
  if (type == "kappa-report") return verify_kappa_doc(j);
  if (type == "free-pair-report") return verify_free_pair_doc(j);
  if (type == "transcript") {
    PipelineTranscript t = transcript_from_json(j);
    TranscriptCheck c = verify_transcript(t);
    if (!c.ok) return c.detail;
    return std::nullopt;
  }
  return "unknown document type: " + type;
}

}  // namespace apx
