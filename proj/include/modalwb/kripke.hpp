#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "modalwb/formula.hpp"

namespace modalwb {

// Relations are stored as per-row bit-sets: row x has bit y set iff x R y.
// World counts are capped at 64 so a row fits one machine word; every use
// in this project stays far below that.
using WorldSet = std::uint64_t;

struct Frame1 {
  int world_count = 1;
  std::vector<WorldSet> r;

  Frame1() : r(1, 0) {}
  Frame1(int n, std::vector<WorldSet> rel) : world_count(n), r(std::move(rel)) {}
  bool related(int x, int y) const { return (r[x] >> y) & 1; }
};

struct Frame2 {
  int world_count = 1;
  std::vector<WorldSet> r0, r1;

  Frame2() : r0(1, 0), r1(1, 0) {}
  Frame2(int n, std::vector<WorldSet> a, std::vector<WorldSet> b)
      : world_count(n), r0(std::move(a)), r1(std::move(b)) {}

  bool rel(int index, int x, int y) const {
    return ((index == 0 ? r0[x] : r1[x]) >> y) & 1;
  }
  WorldSet row(int index, int x) const { return index == 0 ? r0[x] : r1[x]; }
  WorldSet all_worlds() const {
    return world_count == 64 ? ~WorldSet{0} : ((WorldSet{1} << world_count) - 1);
  }
};

struct Model {
  Frame2 frame;
  std::map<std::string, WorldSet> valuation;

  WorldSet truth_set(const std::string& var) const {
    auto it = valuation.find(var);
    return it == valuation.end() ? 0 : it->second; // missing variables read as empty
  }
};

// Exact truth set of a marker-free formula.
WorldSet eval_model(const Model& m, const Formula& f);

enum class FrameCondition {
  weakly_connected_0,
  wcon_minus_0,
  transitive_0,
  pseudo_transitive_1,
  lcom,
  rcom,
  conf,
  one_step_rooted_1,
  symmetric_1,
  // model-relative variants, over the tick relation of a model (and a root
  // point for the commutation ones)
  lcom_M,
  rcom_M,
  conf_M,
  wcon_minus_M,
};

bool condition_is_model_relative(FrameCondition c);
const char* condition_name(FrameCondition c);
std::optional<FrameCondition> condition_from_name(const std::string& name);

struct ConditionResult {
  bool ok = true;
  std::array<int, 3> witness{-1, -1, -1}; // violating triple when !ok

  explicit operator bool() const { return ok; }
};

struct ConditionContext {
  const Model* model = nullptr;
  int root = 0;
};

ConditionResult check_condition(const Frame2& fr, FrameCondition c,
                                const ConditionContext* ctx = nullptr);

// Product frame on pairs (u,v), indexed row-major: (u,v) -> u*|W1|+v.
Frame2 product_frame(const Frame1& f0, const Frame1& f1);

// The derived relation of the tick trick:
//   x RbarM y  iff  exists z: x R0 z, t flips between x and z, and (z=y or z R0 y).
std::vector<WorldSet> tick_relation(const Model& m);

struct ValidityResult {
  bool valid = true;
  Model countermodel; // populated when !valid
  int world = -1;
};

// Exhaustive valuation sweep over the variables occurring in f.
// Throws std::invalid_argument when the sweep would be too large
// (more than 3 variables, more than 12 worlds, or 2^(|W|*vars) > 2^26).
ValidityResult frame_validates(const Frame2& fr, const Formula& f);

// Surjective map preserving both relations forward and satisfying both back
// conditions, or nullopt after exhaustive search. Throws when src has more
// than 16 worlds.
std::optional<std::vector<int>> p_morphism_search(const Frame2& src, const Frame2& dst);

} // namespace modalwb
