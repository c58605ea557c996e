#pragma once

#include <optional>
#include <string>
#include <vector>

#include "apxgroups/covering.hpp"
#include "apxgroups/expansion.hpp"
#include "apxgroups/freecert.hpp"

namespace apx {

enum class PipelineOutcome { ControlledBySubgroupSet, FreePairFound, Inconclusive };

std::string outcome_name(PipelineOutcome o);

/// Machine-checkable record of one end-to-end run:
///   0. verify the approximate-group witness for A;
///   1. obtain a core set B (user-supplied or searched) and a level set
///      A' = A B^(jm) with small expansion, by pigeonhole;
///   2. scan B^m for a certified free pair - if found, stop: FreePairFound;
///   3. locate the coset of H that A's core concentrates on;
///   4. build the subgroup-control certificates for B* = A^2 n H.
/// Every recorded constant is an exact rational and every recorded inclusion
/// re-verifies from the transcript alone.
struct PipelineTranscript {
  // inputs
  ElementSet a;
  Rational k_bound;  // K
  int m = 1;
  Rational epsilon;
  std::string subgroup_spec;
  int length_bound = 0;  // L
  std::string core_source;  // "user" or "auto"

  // step 0
  ApproxWitness witness;

  // derived
  int k_levels = 0;              // min k with (1+eps)^k >= K^4
  bool von_neumann_applicable = false;  // epsilon <= 1/4

  // step 1
  ElementSet core;
  std::optional<NestingResult> nesting;

  // step 2
  std::optional<FreePairResult> free_pair;

  // step 3
  std::optional<Element> coset_rep;
  std::size_t core_coset_count = 0;
  std::size_t a4_coset_count = 0;
  Rational delta_prime;  // |A^4 n Hx| / |A|

  // step 4
  std::optional<SubgroupControlResult> control;

  PipelineOutcome outcome = PipelineOutcome::Inconclusive;
  std::vector<std::string> warnings;
  /// Set when a step failed; contains the exact failing inequality.
  std::optional<std::string> failure;
  /// Fixed remark: the control exponent uses k = 4, inferred from the
  /// A^4-coset bound that step 3 measures.
  std::string note;
};

/// Runs the proof pipeline on a concrete instance. Requires A symmetric with
/// identity (throws InputError otherwise, naming the defect). Step failures
/// are recorded in the transcript (outcome Inconclusive), never fabricated
/// away. A ping-pong pair found when the nesting already certified expansion
/// below 5/4 would be a genuine contradiction and throws VerifyError.
PipelineTranscript run_pipeline(const ElementSet& a, const Rational& k_bound, int m,
                                const Rational& epsilon, const SubgroupOracle& h,
                                const std::optional<ElementSet>& user_core,
                                int length_bound);

struct TranscriptCheck {
  bool ok = true;
  std::string detail;
};

/// Re-verifies every claim in a transcript from scratch: the witness, the
/// nesting chain, the free-pair certificate, the coset counts, and the
/// subgroup-control certificates, all by exact recomputation.
TranscriptCheck verify_transcript(const PipelineTranscript& t);

}  // namespace apx
