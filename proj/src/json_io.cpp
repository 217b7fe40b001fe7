#include "modalwb/json_io.hpp"

#include <stdexcept>

namespace modalwb {

namespace {

json pairs_of(const std::vector<WorldSet>& rel, int n) {
  json out = json::array();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if ((rel[static_cast<std::size_t>(i)] >> j) & 1) out.push_back(json::array({i, j}));
  return out;
}

std::vector<WorldSet> rel_of(const json& j, int n, const char* key) {
  std::vector<WorldSet> rel(static_cast<std::size_t>(n), 0);
  for (const json& pr : j.at(key)) {
    int a = pr.at(0).get<int>();
    int b = pr.at(1).get<int>();
    if (a < 0 || a >= n || b < 0 || b >= n)
      throw std::runtime_error(std::string(key) + ": world index out of range");
    rel[static_cast<std::size_t>(a)] |= WorldSet{1} << b;
  }
  return rel;
}

int world_count_of(const json& j) {
  int n = j.at("worlds").get<int>();
  if (n < 1 || n > 64) throw std::runtime_error("worlds must be in [1, 64]");
  return n;
}

} // namespace

json frame1_to_json(const Frame1& f) {
  return json{{"worlds", f.world_count}, {"r", pairs_of(f.r, f.world_count)}};
}

Frame1 frame1_from_json(const json& j) {
  int n = world_count_of(j);
  return Frame1(n, rel_of(j, n, "r"));
}

json frame2_to_json(const Frame2& f) {
  return json{{"worlds", f.world_count},
              {"r0", pairs_of(f.r0, f.world_count)},
              {"r1", pairs_of(f.r1, f.world_count)}};
}

Frame2 frame2_from_json(const json& j) {
  int n = world_count_of(j);
  return Frame2(n, rel_of(j, n, "r0"), rel_of(j, n, "r1"));
}

json model_to_json(const Model& m) {
  json val = json::object();
  for (const auto& [name, set] : m.valuation) {
    json worlds = json::array();
    for (int i = 0; i < m.frame.world_count; ++i)
      if ((set >> i) & 1) worlds.push_back(i);
    val[name] = worlds;
  }
  json out = frame2_to_json(m.frame);
  out["valuation"] = val;
  return out;
}

Model model_from_json(const json& j) {
  Model m;
  m.frame = frame2_from_json(j);
  for (const auto& [name, worlds] : j.at("valuation").items()) {
    WorldSet set = 0;
    for (const json& w : worlds) {
      int i = w.get<int>();
      if (i < 0 || i >= m.frame.world_count)
        throw std::runtime_error("valuation of " + name + ": world index out of range");
      set |= WorldSet{1} << i;
    }
    m.valuation[name] = set;
  }
  return m;
}

json point_to_json(const Point& p) {
  json out;
  if (p.m_omega)
    out["m"] = "omega";
  else
    out["m"] = p.m;
  if (p.k_root)
    out["k"] = "root";
  else
    out["k"] = p.k;
  return out;
}

Point point_from_json(const json& j) {
  Point p;
  const json& m = j.at("m");
  if (m.is_string()) {
    if (m.get<std::string>() != "omega") throw std::runtime_error("point: bad m");
    p.m_omega = true;
  } else {
    p.m = m.get<std::int64_t>();
    if (p.m < 0) throw std::runtime_error("point: m must be a natural");
  }
  const json& k = j.at("k");
  if (k.is_string()) {
    if (k.get<std::string>() != "root") throw std::runtime_error("point: bad k");
    p.k_root = true;
  } else {
    p.k = k.get<std::int64_t>();
    if (p.k < 0) throw std::runtime_error("point: k must be a natural");
  }
  return p;
}

namespace {

struct AtomSpelling {
  AtomKind kind;
  const char* name;
  const char* arg; // nullptr = no argument
};

constexpr AtomSpelling kAtomSpellings[] = {
    {AtomKind::MEqOmega, "m_eq_omega", nullptr},
    {AtomKind::MGeC, "m_ge_c", "c"},
    {AtomKind::MEqC, "m_eq_c", "c"},
    {AtomKind::MEven, "m_even", nullptr},
    {AtomKind::KRoot, "k_root", nullptr},
    {AtomKind::KEqC, "k_eq_c", "c"},
    {AtomKind::KGeC, "k_ge_c", "c"},
    {AtomKind::KEven, "k_even", nullptr},
    {AtomKind::MEqKPlus, "m_eq_k_plus", "d"},
    {AtomKind::MGtKPlus, "m_gt_k_plus", "d"},
};

json atom_to_json(const Atom& a) {
  for (const AtomSpelling& s : kAtomSpellings)
    if (s.kind == a.kind) {
      json out{{"atom", s.name}};
      if (s.arg) out[s.arg] = a.c;
      return out;
    }
  throw std::runtime_error("unknown atom kind");
}

Atom atom_from_json(const json& j) {
  std::string name = j.at("atom").get<std::string>();
  for (const AtomSpelling& s : kAtomSpellings)
    if (name == s.name) {
      Atom a{s.kind, 0};
      if (s.arg) a.c = j.at(s.arg).get<std::int64_t>();
      return a;
    }
  throw std::runtime_error("unknown atom: " + name);
}

} // namespace

json region_to_json(const Region& r) {
  json cells = json::array();
  for (const Cell& c : r.cells) {
    json lits = json::array();
    for (const Lit& l : c.lits) {
      json a = atom_to_json(l.atom);
      lits.push_back(l.pos ? a : json{{"op", "not"}, {"args", json::array({a})}});
    }
    cells.push_back(json{{"op", "and"}, {"args", lits}});
  }
  return json{{"op", "or"}, {"args", cells}};
}

Region region_from_json(const json& j, const OmegaFamily& fam) {
  if (j.contains("atom")) return Region::single(Cell{{Lit{atom_from_json(j), true}}});
  std::string op = j.at("op").get<std::string>();
  const json& args = j.at("args");
  if (op == "not") {
    if (args.size() != 1) throw std::runtime_error("not takes one argument");
    return region_complement(region_from_json(args[0], fam), fam);
  }
  if (op == "and") {
    Region acc = Region::full();
    for (const json& a : args) acc = region_intersect(acc, region_from_json(a, fam), fam);
    return acc;
  }
  if (op == "or") {
    Region acc = Region::empty();
    for (const json& a : args) acc = region_union(acc, region_from_json(a, fam), fam);
    return acc;
  }
  throw std::runtime_error("unknown region op: " + op);
}

json symbolic_model_to_json(const SymbolicModel& sm) {
  json val = json::object();
  for (const auto& [name, reg] : sm.valuation) val[name] = region_to_json(reg);
  return json{{"first", first_fam_name(sm.family.first)},
              {"second", second_fam_name(sm.family.second)},
              {"valuation", val}};
}

SymbolicModel symbolic_model_from_json(const json& j) {
  SymbolicModel sm;
  auto first = first_fam_from_name(j.at("first").get<std::string>());
  auto second = second_fam_from_name(j.at("second").get<std::string>());
  if (!first || !second) throw std::runtime_error("unknown family name");
  sm.family = {*first, *second};
  for (const auto& [name, expr] : j.at("valuation").items())
    sm.valuation[name] = region_from_json(expr, sm.family);
  return sm;
}

json campaign_report_to_json(const CampaignReport& r) {
  json per_size = json::array();
  for (const SizeRecord& rec : r.per_size) {
    json e{{"size", rec.size},
           {"frames_enumerated", rec.frames_enumerated},
           {"frames_in_class", rec.frames_in_class},
           {"satisfiable_count", rec.satisfiable_count}};
    if (rec.has_counterexample) {
      e["counterexample"] = json{{"model", model_to_json(rec.counterexample_model)},
                                 {"world", rec.counterexample_world}};
    }
    per_size.push_back(std::move(e));
  }
  return json{{"formula", r.formula_name}, {"class", r.class_names},
              {"mode", r.mode},           {"seed", r.seed},
              {"samples", r.samples},     {"per_size", per_size},
              {"total_satisfiable", r.total_satisfiable()},
              {"timing", json{{"elapsed_seconds", r.elapsed_seconds}}}};
}

json claim_report_to_json(const ClaimReport& r) {
  json out{{"claim", claim_name(r.kind)},
           {"samples", r.samples},
           {"seed", r.seed},
           {"violations", r.violations},
           {"discarded", r.discarded},
           {"timing", json{{"elapsed_seconds", r.elapsed_seconds}}}};
  if (r.has_violation) {
    out["violating_model"] = model_to_json(r.violating_model);
    out["violation_detail"] = r.violation_detail;
  }
  return out;
}

json chain_witness_to_json(const ChainWitness& w) {
  json steps = json::array();
  for (std::size_t n = 0; n < w.steps.size(); ++n) {
    const ChainStep& s = w.steps[n];
    json checks = json::array();
    for (const auto& [what, ok] : s.checks)
      checks.push_back(json{{"check", what}, {"holds", ok}});
    steps.push_back(json{{"n", n},
                         {"u", s.u},
                         {"v", s.v},
                         {w.kind == ChainKind::Phi ? "x" : "y", s.aux},
                         {"checks", checks},
                         {"distinct_formula_holds", s.distinct_formula_holds}});
  }
  return json{{"kind", w.kind == ChainKind::Phi ? "phi" : "psi"},
              {"steps", steps},
              {"all_checks_pass", w.all_checks_pass()}};
}

json certificate_to_json(const Certificate& c) {
  json entries = json::array();
  for (const CertEntry& e : c.entries) {
    json j{{"subformula", e.subformula}, {"region", region_to_json(e.region)}};
    if (e.modal_index >= 0) {
      j["modal_index"] = e.modal_index;
      j["child_entry"] = e.child_entry;
      if (e.dia_point) j["dia_point"] = point_to_json(*e.dia_point);
      if (e.dia_witness) j["dia_witness"] = point_to_json(*e.dia_witness);
      if (e.box_point) j["box_point"] = point_to_json(*e.box_point);
      if (e.box_refuter) j["box_refuter"] = point_to_json(*e.box_refuter);
    }
    entries.push_back(std::move(j));
  }
  return json{{"entries", entries}};
}

json crosscheck_report_to_json(const CrosscheckReport& r) {
  json dis = json::array();
  for (const Disagreement& d : r.disagreements)
    dis.push_back(json{{"subformula", d.subformula},
                       {"point", point_to_json(d.point)},
                       {"truncation", d.truncation == TV::True ? "true" : "false"},
                       {"symbolic", d.symbolic}});
  return json{{"window", r.window},
              {"points_compared", r.points_compared},
              {"definite_verdicts", r.definite_verdicts},
              {"disagreements", dis}};
}

} // namespace modalwb
