#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "modalwb/formula.hpp"

namespace modalwb {

struct ChainStep {
  std::string u, v, aux; // aux: x_n for the phi construction, y_n for psi
  std::vector<std::pair<std::string, bool>> checks;
  bool distinct_formula_holds = false;
};

enum class ChainKind { Phi, Psi };

struct ChainWitness {
  ChainKind kind = ChainKind::Phi;
  std::vector<ChainStep> steps;

  bool all_checks_pass() const {
    for (const auto& s : steps) {
      if (!s.distinct_formula_holds) return false;
      for (const auto& [_, ok] : s.checks)
        if (!ok) return false;
    }
    return true;
  }
};

struct ConstructionStuck : std::runtime_error {
  ConstructionStuck(int step, const std::string& missing)
      : std::runtime_error("chain construction stuck at step " + std::to_string(step) +
                           ": no witness for " + missing),
        step(step), missing_witness(missing) {}
  int step;
  std::string missing_witness;
};

// Executes the infinity proofs' inductive constructions literally against any
// model that can evaluate formulas and answer successor-witness queries.
//
// The adapter contract:
//   using Pt / using Set
//   Set eval(const Formula&)                       exact truth set
//   bool mem(const Set&, const Pt&)
//   std::vector<Pt> successors(const Pt&, int index, const Set& within, int limit)
//   bool related(const Pt&, int index, const Pt&)
//   std::string str(const Pt&)
//
// The wcon-/pseudo-transitivity case analyses of the proofs are realized as
// direct relation queries on candidate witnesses; a small candidate budget per
// choice stands in for the proofs' symbolic case reasoning.
template <class Adapter>
ChainWitness extract_chain(Adapter& mdl, typename Adapter::Pt root, ChainKind kind,
                           int n_steps) {
  // candidate pools must outgrow the chain: step n picks points n deep into
  // the root's successor rows
  const int kCandidates = 2 * n_steps + 16;
  using Pt = typename Adapter::Pt;
  using Set = typename Adapter::Set;

  ChainWitness out;
  out.kind = kind;

  Formula p = Formula::var("p"), q = Formula::var("q");

  if (kind == ChainKind::Phi) {
    if (!mdl.mem(mdl.eval(corpus("phi_inf")), root))
      throw ConstructionStuck(0, "phi_inf at the root");

    // dia-exactly-one pattern from the second conjunct
    Formula dhe = Formula::conj(
        Formula::dia(0, p), Formula::box(0, Formula::box(0, Formula::neg(p))));
    Set endpoint = mdl.eval(Formula::conj(p, Formula::box(0, Formula::bot())));
    Set dhe_set = mdl.eval(dhe);
    Set inner = mdl.eval(Formula::conj(
        p, Formula::conj(Formula::box(0, Formula::neg(p)),
                         Formula::box(0, Formula::box(0, Formula::neg(p))))));
    Set dia0_endpoint = mdl.eval(Formula::dia(0, Formula::conj(p, Formula::box(0, Formula::bot()))));
    Set full = mdl.eval(Formula::top());

    std::vector<Set> depth_sets; // diamond_exactly(n, true), built on demand
    auto depth_holds = [&](int n, const Pt& at) {
      while (static_cast<int>(depth_sets.size()) <= n)
        depth_sets.push_back(mdl.eval(diamond_exactly(depth_sets.size(), Formula::top())));
      return mdl.mem(depth_sets[n], at);
    };

    Pt prev_x{};
    bool have_prev = false;

    for (int n = 0; n < n_steps; ++n) {
      bool placed = false;
      ChainStep step;

      // u from the first conjunct (n=0) or the third conjunct via x_{n-1}
      std::vector<Pt> u_pool;
      if (n == 0) {
        for (const Pt& y0 : mdl.successors(root, 1, dia0_endpoint, kCandidates))
          for (const Pt& u : mdl.successors(y0, 0, endpoint, kCandidates))
            u_pool.push_back(u);
      } else {
        u_pool = mdl.successors(prev_x, 1, inner, kCandidates);
      }
      if (u_pool.empty()) throw ConstructionStuck(n, "u");

      for (const Pt& u : u_pool) {
        // lcom: y with root R1 y R0 u
        for (const Pt& y : mdl.successors(root, 1, full, kCandidates)) {
          if (!mdl.related(y, 0, u)) continue;
          // second conjunct at y, then wcon-: v R0 u
          for (const Pt& v : mdl.successors(y, 0, dhe_set, kCandidates)) {
            if (!mdl.related(v, 0, u)) continue;
            // rcom: x with root R0 x R1 v
            for (const Pt& x : mdl.successors(root, 0, full, kCandidates)) {
              if (!mdl.related(x, 1, v)) continue;
              step.u = mdl.str(u);
              step.v = mdl.str(v);
              step.aux = mdl.str(x);
              step.checks.emplace_back("a: v R0 u", mdl.related(v, 0, u));
              step.checks.emplace_back("b: r R0 x", mdl.related(root, 0, x));
              step.checks.emplace_back("b: x R1 v", mdl.related(x, 1, v));
              if (n > 0)
                step.checks.emplace_back("b: x_prev R1 u", mdl.related(prev_x, 1, u));
              step.checks.emplace_back(
                  "c: u satisfies p & [0]~p & [0][0]~p",
                  n == 0 ? mdl.mem(endpoint, u) : mdl.mem(inner, u));
              step.checks.emplace_back("d: v satisfies the one-step pattern",
                                       mdl.mem(dhe_set, v));
              step.distinct_formula_holds = depth_holds(n, u);
              prev_x = x;
              have_prev = true;
              placed = true;
              break;
            }
            if (placed) break;
          }
          if (placed) break;
        }
        if (placed) break;
      }
      if (!placed) throw ConstructionStuck(n, "y/v/x");
      out.steps.push_back(std::move(step));
    }
    (void)have_prev;
    return out;
  }

  // psi construction
  if (!mdl.mem(mdl.eval(corpus("psi_inf")), root))
    throw ConstructionStuck(0, "psi_inf at the root");

  Set e2 = mdl.eval(Formula::conj(
      p, Formula::conj(Formula::neg(q),
                       Formula::conj(Formula::box(0, Formula::neg(q)),
                                     Formula::box(1, Formula::neg(q))))));
  Set vgood = mdl.eval(Formula::conj(q, Formula::box(1, Formula::neg(q))));
  Set ugood = mdl.eval(Formula::conj(
      p, Formula::conj(Formula::neg(q), Formula::conj(Formula::box(0, Formula::neg(q)),
                                                      Formula::dia(1, q)))));
  Set pset = mdl.eval(p);
  Set full = mdl.eval(Formula::top());

  std::vector<Set> chi_sets;
  auto chi_holds = [&](int i, const Pt& at) {
    while (static_cast<int>(chi_sets.size()) <= i)
      chi_sets.push_back(mdl.eval(chi_formula(chi_sets.size())));
    return mdl.mem(chi_sets[i], at);
  };

  Pt y_cur = root;
  Pt v_prev{};
  for (int n = 0; n < n_steps; ++n) {
    ChainStep step;
    bool placed = false;

    if (n == 0) {
      for (const Pt& u : mdl.successors(y_cur, 0, e2, kCandidates)) {
        for (const Pt& v : mdl.successors(y_cur, 0, vgood, kCandidates)) {
          if (!mdl.related(v, 0, u)) continue;
          step.u = mdl.str(u);
          step.v = mdl.str(v);
          step.aux = mdl.str(y_cur);
          step.checks.emplace_back("e: y = r", true);
          step.checks.emplace_back("e: y R0 v", mdl.related(y_cur, 0, v));
          step.checks.emplace_back("e: v R0 u", mdl.related(v, 0, u));
          step.checks.emplace_back("g: u satisfies p", mdl.mem(pset, u));
          step.checks.emplace_back("h: v satisfies q & [1]~q", mdl.mem(vgood, v));
          step.distinct_formula_holds = chi_holds(0, u);
          v_prev = v;
          placed = true;
          break;
        }
        if (placed) break;
      }
    } else {
      // third conjunct at v_{n-1}, pseudo-transitivity, lcom, second conjunct
      for (const Pt& u : mdl.successors(v_prev, 1, ugood, kCandidates)) {
        if (!mdl.related(u, 1, v_prev)) continue;
        for (const Pt& y : mdl.successors(y_cur, 1, full, kCandidates)) {
          if (!mdl.related(y, 0, u)) continue;
          bool y_rooted = (mdl.str(y) == mdl.str(root)) || mdl.related(root, 1, y);
          if (!y_rooted) continue;
          for (const Pt& v : mdl.successors(y, 0, vgood, kCandidates)) {
            if (!mdl.related(v, 0, u)) continue;
            step.u = mdl.str(u);
            step.v = mdl.str(v);
            step.aux = mdl.str(y);
            step.checks.emplace_back("e: y = r or r R1 y", y_rooted);
            step.checks.emplace_back("e: y R0 v", mdl.related(y, 0, v));
            step.checks.emplace_back("e: v R0 u", mdl.related(v, 0, u));
            step.checks.emplace_back("f: v_prev R1 u", mdl.related(v_prev, 1, u));
            step.checks.emplace_back("f: u R1 v_prev", mdl.related(u, 1, v_prev));
            step.checks.emplace_back("g: u satisfies p", mdl.mem(pset, u));
            step.checks.emplace_back("h: v satisfies q & [1]~q", mdl.mem(vgood, v));
            bool distinct = chi_holds(n, u);
            for (int i = 0; i < n && distinct; ++i)
              if (chi_holds(i, u)) distinct = false;
            step.distinct_formula_holds = distinct;
            v_prev = v;
            y_cur = y;
            placed = true;
            break;
          }
          if (placed) break;
        }
        if (placed) break;
      }
    }
    if (!placed) throw ConstructionStuck(n, kind == ChainKind::Psi ? "u/y/v" : "u");
    out.steps.push_back(std::move(step));
  }
  return out;
}

} // namespace modalwb
