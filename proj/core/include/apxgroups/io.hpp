#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "apxgroups/covering.hpp"
#include "apxgroups/expansion.hpp"
#include "apxgroups/freecert.hpp"
#include "apxgroups/pipeline.hpp"

namespace apx {

using Json = nlohmann::json;

// Group specs: {"family":"free","rank":2} | {"family":"abelian","rank":d} |
// {"family":"heisenberg"} | {"family":"matrix","n":2} |
// {"family":"table","table":[[...]]}.
Json group_to_json(const GroupContext& g);
ContextPtr group_from_json(const Json& j);

// Elements: words as arrays of signed generator indices; matrices as flat
// row-major arrays of "p/q" strings; tuples as integer arrays; table
// elements as plain integers. Parsing canonicalizes.
Json element_to_json(const GroupContext& g, const Element& e);
Element element_from_json(const GroupContext& g, const Json& j);
std::string element_to_string(const GroupContext& g, const Element& e);

// Set files: {"group": <spec>, "elements": [...]} in canonical order.
Json set_to_json(const ElementSet& s);
ElementSet set_from_json(const Json& j);
Json elements_to_json(const ElementSet& s);
ElementSet elements_from_json(const ContextPtr& ctx, const Json& arr);

// Certificates and reports. Every emitted document carries a "type" field
// and can be re-checked from its serialized form alone by verify_document.
Json approx_witness_to_json(const ApproxWitness& w);
ApproxWitness approx_witness_from_json(const Json& j);
Json control_witness_to_json(const ControlWitness& w);
ControlWitness control_witness_from_json(const Json& j);
Json cover_certificate_to_json(const CoverCertificate& c);
CoverCertificate cover_certificate_from_json(const Json& j);
Json freeness_certificate_to_json(const ContextPtr& ctx, const FreenessCertificate& c);
FreenessCertificate freeness_certificate_from_json(const ContextPtr& ctx, const Json& j);
Json subgroup_control_to_json(const SubgroupControlResult& r,
                              const std::string& oracle_spec, const Element& x);

Json transcript_to_json(const PipelineTranscript& t);
PipelineTranscript transcript_from_json(const Json& j);

// Report documents emitted by the CLI; each embeds everything needed for an
// exact re-check.
Json doubling_report_json(const ElementSet& s);
Json expansion_report_json(const ElementSet& a, const ElementSet& x,
                           const std::string& source);
Json nesting_report_json(const ElementSet& a, const ElementSet& b,
                         const NestingResult& r, const Rational& k_bound);
Json kappa_report_json(const ContextPtr& ctx, const ElementSet& x,
                       const SetSampler& sampler, int trials, const Rational& value);
Json free_pair_report_json(const ElementSet& a, int m, int length_bound,
                           const std::optional<FreePairResult>& result);

/// Dispatches on the "type" field and re-verifies the document from scratch.
/// Returns nullopt on success, else the first failing condition.
std::optional<std::string> verify_document(const Json& j);

// Canonical output: sorted keys (nlohmann objects), two-space indent, one
// trailing newline. Byte-identical for identical documents.
std::string dump_json(const Json& j);
Json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace apx
