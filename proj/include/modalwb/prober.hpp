#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "modalwb/formula.hpp"
#include "modalwb/kripke.hpp"
#include "modalwb/rng.hpp"

namespace modalwb {

struct FrameClassSpec {
  std::vector<FrameCondition> conditions;
  bool product_only = false;
  // component conditions when product_only: applied to the single relation of
  // the first / second component (read as if it were r0 / r1 of a 2-frame)
  std::vector<FrameCondition> first_component;
  std::vector<FrameCondition> second_component;

  bool in_class(const Frame2& fr) const;
};

// Visits every 2-frame on exactly n worlds whose relations satisfy the class
// conditions. r0 candidates are filtered by their unary conditions before the
// inner r1 sweep. With dedup_iso only canonical representatives (minimal
// adjacency bit-string over all world permutations) are visited.
// Throws when n > 5.
void enumerate_frames(int n, const FrameClassSpec& spec,
                      const std::function<void(const Frame2&)>& visit,
                      bool dedup_iso = false);

std::uint64_t frame_iso_canonical_key(const Frame2& fr);
bool frame_is_iso_canonical(const Frame2& fr);

struct SatResult {
  bool satisfiable = false;
  Model model;
  int world = -1;
};

// Exhaustive valuation sweep over the variables of f. Throws when
// 2^(|W| * vars) exceeds 2^24.
SatResult frame_satisfiable(const Frame2& fr, const Formula& f);

struct SizeRecord {
  int size = 0;
  std::uint64_t frames_enumerated = 0; // raw, before class filtering
  std::uint64_t frames_in_class = 0;
  std::uint64_t satisfiable_count = 0;
  bool has_counterexample = false;
  Frame2 counterexample_frame;
  Model counterexample_model;
  int counterexample_world = -1;
};

struct CampaignReport {
  std::string formula_name;
  std::vector<std::string> class_names;
  std::string mode; // "exhaustive" | "random" | "product"
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  std::vector<SizeRecord> per_size;
  double elapsed_seconds = 0.0;

  std::uint64_t total_satisfiable() const {
    std::uint64_t s = 0;
    for (const auto& r : per_size) s += r.satisfiable_count;
    return s;
  }
};

enum class CampaignMode { Exhaustive, Random };

struct CampaignOptions {
  CampaignMode mode = CampaignMode::Exhaustive;
  int max_size = 3;
  std::uint64_t samples = 0; // random mode: per size
  std::uint64_t seed = 0;
  int jobs = 1; // parallel workers; 0 = all hardware threads
  bool dedup_iso = false;
};

// OpenMP-parallel campaign: the r0 enumeration space (exhaustive mode) or the
// sample index space (random mode) is partitioned across workers; partial
// records merge deterministically, so reports are byte-identical for equal
// (formula, spec, options).
CampaignReport unsat_campaign(const Formula& f, const std::string& formula_name,
                              const FrameClassSpec& spec, const CampaignOptions& opt);

// Plain single-threaded reference implementation, kept for testing and
// benchmarking against the parallel kernel.
CampaignReport unsat_campaign_serial(const Formula& f, const std::string& formula_name,
                                     const FrameClassSpec& spec,
                                     const CampaignOptions& opt);

// Random in-class frame generation: edge probability 1/2, then condition
// repair (transitive closure; weak-connectedness saturation along a random
// linear order; commutation/confluence/pseudo-transitivity saturation that
// only ever adds r1 edges and reflexive r0 edges), with rejection as
// fallback. The result satisfies every condition in the spec.
Frame2 random_in_class_frame(int n, const FrameClassSpec& spec, Rng& rng);

Model random_model(const Frame2& fr, const std::vector<std::string>& vars, Rng& rng);

enum class ClaimKind { Trans, Wcon, CommL, CommR, CommC, DiaSemantics };

const char* claim_name(ClaimKind c);
std::optional<ClaimKind> claim_from_name(const std::string& name);

struct ClaimReport {
  ClaimKind kind = ClaimKind::Trans;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t violations = 0;
  std::uint64_t discarded = 0; // samples whose hypotheses could not be met
  bool has_violation = false;
  Model violating_model;
  std::string violation_detail;
  double elapsed_seconds = 0.0;
};

// Random models meeting each claim's hypotheses; asserts the claim's
// conclusion on every sample. Sharded by sample index when jobs > 1.
ClaimReport claim_test(ClaimKind claim, std::uint64_t samples, std::uint64_t seed,
                       int jobs = 1);

} // namespace modalwb
