#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "modalwb/formula.hpp"

namespace modalwb {

// First components: (omega+1, >), (omega+1, >=), (omega, <), (omega, <=).
enum class FirstFam { Omega1Desc, Omega1DescRefl, OmegaAsc, OmegaAscRefl };

// Second components: one-step rooted frame (root r plus columns y_0, y_1, ...
// with r R1 y_k only), the universal frame (omega, WxW), the difference
// frame (omega, !=).
enum class SecondFam { OneStep, Universal, Difference };

struct OmegaFamily {
  FirstFam first = FirstFam::Omega1Desc;
  SecondFam second = SecondFam::OneStep;

  bool first_has_omega() const {
    return first == FirstFam::Omega1Desc || first == FirstFam::Omega1DescRefl;
  }
  bool first_reflexive() const {
    return first == FirstFam::Omega1DescRefl || first == FirstFam::OmegaAscRefl;
  }
  bool first_descending() const {
    return first == FirstFam::Omega1Desc || first == FirstFam::Omega1DescRefl;
  }
};

const char* first_fam_name(FirstFam f);
const char* second_fam_name(SecondFam f);
std::optional<FirstFam> first_fam_from_name(const std::string& s);
std::optional<SecondFam> second_fam_from_name(const std::string& s);

// A point of the product: first coordinate m (natural or omega), second
// coordinate k (root or a column index).
struct Point {
  std::int64_t m = 0;
  bool m_omega = false;
  std::int64_t k = 0;
  bool k_root = false;

  static Point omega(std::int64_t k) { return {0, true, k, false}; }
  static Point omega_root() { return {0, true, 0, true}; }
  static Point at_root(std::int64_t m) { return {m, false, 0, true}; }
  static Point of(std::int64_t m, std::int64_t k) { return {m, false, k, false}; }

  friend bool operator==(const Point&, const Point&) = default;
};

bool point_in_universe(const Point& p, const OmegaFamily& fam);
bool points_related(const Point& a, int index, const Point& b, const OmegaFamily& fam);
std::string point_str(const Point& p);

// Atom vocabulary of the region algebra. Constants c are naturals, offsets d
// are arbitrary integers. k-comparisons are false at the root column;
// EVEN(m) entails m != omega; m >= c and m > k+d hold at m = omega.
enum class AtomKind : std::uint8_t {
  MEqOmega, // m = omega
  MGeC,     // m >= c   (true at omega)
  MEqC,     // m = c
  MEven,    // EVEN(m), entails m finite
  KRoot,    // k = root
  KEqC,     // k = c
  KGeC,     // k >= c
  KEven,    // EVEN(k), entails k a column
  MEqKPlus, // m = k + d (entails m finite, k a column)
  MGtKPlus, // m > k + d (entails k a column; true at m = omega)
};

struct Atom {
  AtomKind kind;
  std::int64_t c = 0;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

struct Lit {
  Atom atom;
  bool pos = true;
  friend auto operator<=>(const Lit&, const Lit&) = default;
};

bool atom_holds(const Atom& a, const Point& p);
bool lit_holds(const Lit& l, const Point& p);

// A cell is a conjunction of literals; a region a disjunction of cells (DNF).
struct Cell {
  std::vector<Lit> lits; // sorted, deduped

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct Region {
  std::vector<Cell> cells;

  static Region empty() { return {}; }
  static Region full() { return Region{{Cell{}}}; }
  static Region single(Cell c) { return Region{{std::move(c)}}; }

  friend bool operator==(const Region&, const Region&) = default;
};

bool cell_member(const Cell& c, const Point& p);
bool region_member(const Region& r, const Point& p, const OmegaFamily& fam);

// Normalizes in place: sorts/dedupes literals, merges bound literals, drops
// cells that are empty over the family's universe, drops subsumed cells.
Cell normalize_cell(Cell c, bool& is_empty, const OmegaFamily& fam);
Region normalize(Region r, const OmegaFamily& fam);

Region region_union(Region a, const Region& b, const OmegaFamily& fam);
Region region_intersect(const Region& a, const Region& b, const OmegaFamily& fam);
Region region_complement(const Region& a, const OmegaFamily& fam);

// Emptiness with the lexicographically minimal witness (least m with omega
// last, then root before column 0, 1, ...). Decided by a bounded scan whose
// bound is derived from the cell's constants.
std::optional<Point> region_witness(const Region& r, const OmegaFamily& fam);
bool region_empty(const Region& r, const OmegaFamily& fam);

// First n witnesses in the minimal order.
std::vector<Point> region_witnesses(const Region& r, const OmegaFamily& fam, int n);

// { x : exists y (x R_index y and y in t) }, exact.
Region preimage(const Region& t, int index, const OmegaFamily& fam);

// All R_index-successors of a concrete point, as a region.
Region successor_region(const Point& p, int index, const OmegaFamily& fam);
Region point_region(const Point& p);

struct SymbolicModel {
  OmegaFamily family;
  std::map<std::string, Region> valuation;
};

// One certificate entry per formula node (pre-order index).
struct CertEntry {
  std::string subformula;
  Region region;
  int modal_index = -1;      // 0/1 for box and diamond nodes
  int child_entry = -1;      // pre-order index of the operand, for modal nodes
  // diamond nodes: sampled true point and its verifying successor
  std::optional<Point> dia_point, dia_witness;
  // box nodes: sampled false point and its refuting successor
  std::optional<Point> box_point, box_refuter;
};

struct Certificate {
  std::vector<CertEntry> entries; // pre-order over the formula tree
};

// Bottom-up symbolic evaluation; the certificate records the region of every
// subformula plus concrete modal witnesses/refuters.
std::pair<Region, Certificate> eval_symbolic(const SymbolicModel& sm, const Formula& f);

// Re-verifies every stored witness by membership and by the frame relation.
bool certificate_valid(const Certificate& cert, const SymbolicModel& sm);

// Built-in witness models from the satisfiability lemmas: lemma_satone,
// lemma_satoner, lemma_satoner_refl, lemma_sattwo, fasc_witness,
// fdesc_witness.
SymbolicModel builtin_witness(const std::string& name);

// The formula each built-in witness is a witness for, and the target point.
std::pair<std::string, Point> builtin_target(const std::string& name);
std::vector<std::string> builtin_witness_names();

// ---------------------------------------------------------------------------
// Three-valued truncation oracle

enum class TV : std::uint8_t { False, True, Unknown };

struct TruncationResult {
  int window = 0;
  std::vector<Point> points;
  // verdicts[node][point_index], nodes in pre-order
  std::vector<std::string> subformulas;
  std::vector<std::vector<TV>> verdicts;
};

// Three-valued evaluation over the window ([0..N] u {omega}) x ({root} u
// [0..N]), intersected with the family's universe. Definite verdicts only
// when the in-window information suffices.
TruncationResult truncation_eval(const SymbolicModel& sm, const Formula& f, int window);

struct Disagreement {
  std::string subformula;
  Point point;
  TV truncation;
  bool symbolic;
};

struct CrosscheckReport {
  int window = 0;
  std::uint64_t points_compared = 0;
  std::uint64_t definite_verdicts = 0;
  std::vector<Disagreement> disagreements;
};

// Wherever the truncation oracle is definite it must agree with the region
// evaluator.
CrosscheckReport crosscheck(const SymbolicModel& sm, const Formula& f, int window);

} // namespace modalwb
