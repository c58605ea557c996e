#include "apxgroups/io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace apx {

namespace {

const Json& field(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw InputError(std::string("missing field \"") + key + "\"");
  return *it;
}

Rational rational_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (v.is_number_integer()) return Rational(BigInt(v.get<long long>()));
  if (v.is_string()) return parse_rational(v.get<std::string>());
  throw InputError(std::string("field \"") + key + "\" is not a rational");
}

Json rational_json(const Rational& r) { return format_rational(r); }

}  // namespace

// ---------------------------------------------------------------------------
// Groups and elements
// ---------------------------------------------------------------------------

Json group_to_json(const GroupContext& g) {
  Json j;
  switch (g.family()) {
    case Family::Free:
      j["family"] = "free";
      j["rank"] = g.rank();
      break;
    case Family::Abelian:
      j["family"] = "abelian";
      j["rank"] = g.rank();
      break;
    case Family::Heisenberg:
      j["family"] = "heisenberg";
      break;
    case Family::Matrix:
      j["family"] = "matrix";
      j["n"] = g.rank();
      break;
    case Family::Table:
      j["family"] = "table";
      j["table"] = g.table();
      break;
  }
  return j;
}

ContextPtr group_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("group spec must be an object");
  std::string fam = field(j, "family").get<std::string>();
  if (fam == "free") return GroupContext::free_group(field(j, "rank").get<int>());
  if (fam == "abelian") return GroupContext::free_abelian(field(j, "rank").get<int>());
  if (fam == "heisenberg") return GroupContext::heisenberg();
  if (fam == "matrix") return GroupContext::matrix_group(field(j, "n").get<int>());
  if (fam == "table")
    return GroupContext::finite_table(
        field(j, "table").get<std::vector<std::vector<int>>>());
  throw InputError("unknown family: " + fam);
}

Json element_to_json(const GroupContext& g, const Element& e) {
  switch (g.family()) {
    case Family::Free: {
      Json arr = Json::array();
      std::size_t total = 0;
      for (Run r : e.int_span()) {
        total += static_cast<std::size_t>(run_count(r));
        if (total > 10'000'000)
          throw InputError("word too long to serialize symbol-by-symbol");
        for (Int i = 0; i < run_count(r); ++i) arr.push_back(run_gen(r));
      }
      return arr;
    }
    case Family::Abelian:
    case Family::Heisenberg: {
      Json arr = Json::array();
      for (Int v : e.int_span()) arr.push_back(v);
      return arr;
    }
    case Family::Matrix: {
      Json arr = Json::array();
      for (const Rational& r : e.matrix().entries) arr.push_back(format_rational(r));
      return arr;
    }
    case Family::Table:
      return Json(e.ints()[0]);
  }
  throw InputError("unknown family");
}

Element element_from_json(const GroupContext& g, const Json& j) {
  switch (g.family()) {
    case Family::Free: {
      if (!j.is_array()) throw InputError("word element must be an array of symbols");
      std::vector<int> symbols;
      symbols.reserve(j.size());
      for (const Json& v : j) symbols.push_back(v.get<int>());
      return g.word(symbols);
    }
    case Family::Abelian:
    case Family::Heisenberg: {
      if (!j.is_array()) throw InputError("tuple element must be an integer array");
      std::vector<Int> coords;
      coords.reserve(j.size());
      for (const Json& v : j) coords.push_back(v.get<Int>());
      return g.tuple(coords);
    }
    case Family::Matrix: {
      if (!j.is_array()) throw InputError("matrix element must be an array of entries");
      std::vector<Rational> entries;
      entries.reserve(j.size());
      for (const Json& v : j) {
        if (v.is_number_integer())
          entries.push_back(Rational(BigInt(v.get<long long>())));
        else
          entries.push_back(parse_rational(v.get<std::string>()));
      }
      return g.matrix(std::move(entries));
    }
    case Family::Table:
      return g.table_element(j.get<int>());
  }
  throw InputError("unknown family");
}

std::string element_to_string(const GroupContext& g, const Element& e) {
  return element_to_json(g, e).dump();
}

Json elements_to_json(const ElementSet& s) {
  Json arr = Json::array();
  for (const Element& e : s.elements()) arr.push_back(element_to_json(*s.context(), e));
  return arr;
}

ElementSet elements_from_json(const ContextPtr& ctx, const Json& arr) {
  if (!arr.is_array()) throw InputError("element list must be an array");
  std::vector<Element> elems;
  elems.reserve(arr.size());
  for (const Json& v : arr) elems.push_back(element_from_json(*ctx, v));
  return ElementSet(ctx, std::move(elems));
}

Json set_to_json(const ElementSet& s) {
  Json j;
  j["group"] = group_to_json(*s.context());
  j["elements"] = elements_to_json(s);
  return j;
}

ElementSet set_from_json(const Json& j) {
  ContextPtr ctx = group_from_json(field(j, "group"));
  return elements_from_json(ctx, field(j, "elements"));
}

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

Json approx_witness_to_json(const ApproxWitness& w) {
  Json j;
  j["type"] = "approx-witness";
  j["group"] = group_to_json(*w.base.context());
  j["set"] = elements_to_json(w.base);
  j["witness"] = elements_to_json(w.x);
  j["K"] = rational_json(w.k);
  j["verified"] = w.verified;
  return j;
}

ApproxWitness approx_witness_from_json(const Json& j) {
  ContextPtr ctx = group_from_json(field(j, "group"));
  ApproxWitness w;
  w.base = elements_from_json(ctx, field(j, "set"));
  w.x = elements_from_json(ctx, field(j, "witness"));
  w.k = rational_field(j, "K");
  w.verified = field(j, "verified").get<bool>();
  return w;
}

Json control_witness_to_json(const ControlWitness& w) {
  Json j;
  j["type"] = "control-witness";
  j["group"] = group_to_json(*w.base.context());
  j["set"] = elements_to_json(w.base);
  j["b"] = elements_to_json(w.b);
  j["x"] = elements_to_json(w.x);
  j["K"] = rational_json(w.k);
  return j;
}

ControlWitness control_witness_from_json(const Json& j) {
  ContextPtr ctx = group_from_json(field(j, "group"));
  ControlWitness w;
  w.base = elements_from_json(ctx, field(j, "set"));
  w.b = elements_from_json(ctx, field(j, "b"));
  w.x = elements_from_json(ctx, field(j, "x"));
  w.k = rational_field(j, "K");
  return w;
}

Json cover_certificate_to_json(const CoverCertificate& c) {
  Json j;
  j["type"] = "cover-certificate";
  j["group"] = group_to_json(*c.s.context());
  j["s"] = elements_to_json(c.s);
  j["t"] = elements_to_json(c.t);
  j["x"] = elements_to_json(c.x);
  j["covered"] = c.covered;
  j["disjointness_checked"] = c.disjointness_checked;
  j["ratio_bound"] = rational_json(c.ratio_bound);
  return j;
}

CoverCertificate cover_certificate_from_json(const Json& j) {
  ContextPtr ctx = group_from_json(field(j, "group"));
  CoverCertificate c;
  c.s = elements_from_json(ctx, field(j, "s"));
  c.t = elements_from_json(ctx, field(j, "t"));
  c.x = elements_from_json(ctx, field(j, "x"));
  c.covered = field(j, "covered").get<bool>();
  c.disjointness_checked = field(j, "disjointness_checked").get<bool>();
  c.ratio_bound = rational_field(j, "ratio_bound");
  return c;
}

Json freeness_certificate_to_json(const ContextPtr& ctx, const FreenessCertificate& c) {
  Json j;
  j["a"] = element_to_json(*ctx, c.a);
  j["b"] = element_to_json(*ctx, c.b);
  if (c.mode == FreenessMode::PingPong) {
    j["mode"] = "ping-pong";
    j["t"] = rational_json(c.t);
    j["s"] = rational_json(c.s);
    j["conclusive"] = true;
  } else {
    j["mode"] = "no-relation";
    j["L"] = c.length_bound;
    j["words_checked"] = c.words_checked;
    j["conclusive"] = false;
  }
  return j;
}

FreenessCertificate freeness_certificate_from_json(const ContextPtr& ctx, const Json& j) {
  FreenessCertificate c;
  c.a = element_from_json(*ctx, field(j, "a"));
  c.b = element_from_json(*ctx, field(j, "b"));
  std::string mode = field(j, "mode").get<std::string>();
  if (mode == "ping-pong") {
    c.mode = FreenessMode::PingPong;
    c.t = rational_field(j, "t");
    c.s = rational_field(j, "s");
  } else if (mode == "no-relation") {
    c.mode = FreenessMode::NoRelationUpTo;
    c.length_bound = field(j, "L").get<int>();
    c.words_checked = field(j, "words_checked").get<std::uint64_t>();
  } else {
    throw InputError("unknown freeness certificate mode: " + mode);
  }
  return c;
}

Json subgroup_control_to_json(const SubgroupControlResult& r,
                              const std::string& oracle_spec, const Element& x) {
  const ContextPtr& ctx = r.b.context();
  Json j;
  j["type"] = "subgroup-control";
  j["group"] = group_to_json(*ctx);
  j["set"] = elements_to_json(r.control.base);
  j["subgroup"] = oracle_spec;
  j["x"] = element_to_json(*ctx, x);
  j["k"] = r.k;
  j["delta"] = rational_json(r.delta);
  j["b"] = elements_to_json(r.b);
  j["b_witness"] = elements_to_json(r.b_witness.x);
  j["b_witness_bound"] = rational_json(r.b_witness.k);
  j["control_x"] = elements_to_json(r.control.x);
  j["control_bound"] = rational_json(r.control.k);
  return j;
}

// ---------------------------------------------------------------------------
// Transcripts
// ---------------------------------------------------------------------------

std::string outcome_name(PipelineOutcome o) {
  switch (o) {
    case PipelineOutcome::ControlledBySubgroupSet:
      return "controlled-by-subgroup-set";
    case PipelineOutcome::FreePairFound:
      return "free-pair-found";
    case PipelineOutcome::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

namespace {

PipelineOutcome outcome_from_name(const std::string& s) {
  if (s == "controlled-by-subgroup-set") return PipelineOutcome::ControlledBySubgroupSet;
  if (s == "free-pair-found") return PipelineOutcome::FreePairFound;
  if (s == "inconclusive") return PipelineOutcome::Inconclusive;
  throw InputError("unknown outcome: " + s);
}

}  // namespace

Json transcript_to_json(const PipelineTranscript& t) {
  const ContextPtr& ctx = t.a.context();
  Json j;
  j["type"] = "transcript";
  j["group"] = group_to_json(*ctx);
  j["set"] = elements_to_json(t.a);
  Json params;
  params["K"] = rational_json(t.k_bound);
  params["m"] = t.m;
  params["epsilon"] = rational_json(t.epsilon);
  params["subgroup"] = t.subgroup_spec;
  params["L"] = t.length_bound;
  j["params"] = params;
  j["core_source"] = t.core_source;
  j["witness"] = elements_to_json(t.witness.x);
  j["k_levels"] = t.k_levels;
  j["von_neumann_applicable"] = t.von_neumann_applicable;
  j["core"] = elements_to_json(t.core);
  if (t.nesting) {
    Json n;
    n["j"] = t.nesting->j;
    n["k"] = t.nesting->k;
    n["a_prime_size"] = t.nesting->a_prime_size;
    n["expanded_size"] = t.nesting->expanded_size;
    n["expansion"] = rational_json(t.nesting->expansion);
    n["core_in_a4"] = t.nesting->core_in_a4;
    n["core_power_in_a4"] = t.nesting->core_power_in_a4;
    n["certified"] = t.nesting->certified;
    j["nesting"] = n;
  } else {
    j["nesting"] = nullptr;
  }
  if (t.free_pair) {
    Json fp;
    fp["a"] = element_to_json(*ctx, t.free_pair->a);
    fp["b"] = element_to_json(*ctx, t.free_pair->b);
    fp["certificate"] = freeness_certificate_to_json(ctx, t.free_pair->certificate);
    j["free_pair"] = fp;
  } else {
    j["free_pair"] = nullptr;
  }
  if (t.coset_rep) {
    Json c;
    c["x"] = element_to_json(*ctx, *t.coset_rep);
    c["core_count"] = t.core_coset_count;
    c["a4_count"] = t.a4_coset_count;
    c["delta_prime"] = rational_json(t.delta_prime);
    j["coset"] = c;
  } else {
    j["coset"] = nullptr;
  }
  if (t.control) {
    j["control"] = subgroup_control_to_json(*t.control, t.subgroup_spec,
                                            t.coset_rep.value());
  } else {
    j["control"] = nullptr;
  }
  j["outcome"] = outcome_name(t.outcome);
  j["warnings"] = t.warnings;
  j["failure"] = t.failure ? Json(*t.failure) : Json(nullptr);
  j["note"] = t.note;
  return j;
}

PipelineTranscript transcript_from_json(const Json& j) {
  ContextPtr ctx = group_from_json(field(j, "group"));
  PipelineTranscript t;
  t.a = elements_from_json(ctx, field(j, "set"));
  const Json& params = field(j, "params");
  t.k_bound = rational_field(params, "K");
  t.m = field(params, "m").get<int>();
  t.epsilon = rational_field(params, "epsilon");
  t.subgroup_spec = field(params, "subgroup").get<std::string>();
  t.length_bound = field(params, "L").get<int>();
  t.core_source = field(j, "core_source").get<std::string>();
  t.witness.base = t.a;
  t.witness.x = elements_from_json(ctx, field(j, "witness"));
  t.witness.k = t.k_bound;
  t.k_levels = field(j, "k_levels").get<int>();
  t.von_neumann_applicable = field(j, "von_neumann_applicable").get<bool>();
  t.core = elements_from_json(ctx, field(j, "core"));
  if (!field(j, "nesting").is_null()) {
    const Json& n = field(j, "nesting");
    NestingResult r;
    r.j = field(n, "j").get<int>();
    r.k = field(n, "k").get<int>();
    r.m = t.m;
    r.epsilon = t.epsilon;
    r.a_prime_size = field(n, "a_prime_size").get<std::size_t>();
    r.expanded_size = field(n, "expanded_size").get<std::size_t>();
    r.expansion = rational_field(n, "expansion");
    r.core_in_a4 = field(n, "core_in_a4").get<bool>();
    r.core_power_in_a4 = field(n, "core_power_in_a4").get<bool>();
    r.certified = field(n, "certified").get<bool>();
    t.nesting = std::move(r);
  }
  if (!field(j, "free_pair").is_null()) {
    const Json& fp = field(j, "free_pair");
    FreePairResult r;
    r.a = element_from_json(*ctx, field(fp, "a"));
    r.b = element_from_json(*ctx, field(fp, "b"));
    r.certificate = freeness_certificate_from_json(ctx, field(fp, "certificate"));
    t.free_pair = std::move(r);
  }
  if (!field(j, "coset").is_null()) {
    const Json& c = field(j, "coset");
    t.coset_rep = element_from_json(*ctx, field(c, "x"));
    t.core_coset_count = field(c, "core_count").get<std::size_t>();
    t.a4_coset_count = field(c, "a4_count").get<std::size_t>();
    t.delta_prime = rational_field(c, "delta_prime");
  }
  if (!field(j, "control").is_null()) {
    const Json& c = field(j, "control");
    SubgroupControlResult r;
    r.b = elements_from_json(ctx, field(c, "b"));
    r.k = field(c, "k").get<int>();
    r.delta = rational_field(c, "delta");
    r.b_witness.base = r.b;
    r.b_witness.x = elements_from_json(ctx, field(c, "b_witness"));
    r.b_witness.k = rational_field(c, "b_witness_bound");
    r.b_witness.verified = true;
    r.control.base = t.a;
    r.control.b = r.b;
    r.control.x = elements_from_json(ctx, field(c, "control_x"));
    r.control.k = rational_field(c, "control_bound");
    t.control = std::move(r);
  }
  t.outcome = outcome_from_name(field(j, "outcome").get<std::string>());
  t.warnings = field(j, "warnings").get<std::vector<std::string>>();
  if (!field(j, "failure").is_null())
    t.failure = field(j, "failure").get<std::string>();
  t.note = field(j, "note").get<std::string>();
  return t;
}

// ---------------------------------------------------------------------------
// Files and canonical dumps
// ---------------------------------------------------------------------------

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw InputError("bad JSON in " + path + ": " + e.what());
  }
  return j;
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path);
  out << dump_json(j);
}

}  // namespace apx
