#pragma once

#include <map>
#include <string>
#include <vector>

#include "modalwb/chain.hpp"
#include "modalwb/kripke.hpp"
#include "modalwb/omega.hpp"

namespace modalwb {

// extract_chain adapter over a finite Model.
struct FiniteChainAdapter {
  using Pt = int;
  using Set = WorldSet;

  const Model& m;

  Set eval(const Formula& f) const { return eval_model(m, f); }
  bool mem(const Set& s, const Pt& p) const { return (s >> p) & 1; }

  std::vector<Pt> successors(const Pt& x, int index, const Set& within, int limit) const {
    std::vector<Pt> out;
    WorldSet row = m.frame.row(index, x) & within;
    for (int y = 0; y < m.frame.world_count && static_cast<int>(out.size()) < limit; ++y)
      if ((row >> y) & 1) out.push_back(y);
    return out;
  }

  bool related(const Pt& x, int index, const Pt& y) const { return m.frame.rel(index, x, y); }
  std::string str(const Pt& p) const { return std::to_string(p); }
};

// extract_chain adapter over a symbolic product model; truth sets are regions
// and successor queries enumerate minimal witnesses of intersections.
struct SymbolicChainAdapter {
  using Pt = Point;
  using Set = Region;

  const SymbolicModel& sm;
  std::map<std::string, Region> cache;

  Set eval(const Formula& f) {
    std::string key = render(f);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Region r = eval_symbolic(sm, f).first;
    cache.emplace(std::move(key), r);
    return r;
  }

  bool mem(const Set& s, const Pt& p) const { return region_member(s, p, sm.family); }

  std::vector<Pt> successors(const Pt& x, int index, const Set& within, int limit) const {
    return region_witnesses(
        region_intersect(successor_region(x, index, sm.family), within, sm.family),
        sm.family, limit);
  }

  bool related(const Pt& x, int index, const Pt& y) const {
    return points_related(x, index, y, sm.family);
  }

  std::string str(const Pt& p) const { return point_str(p); }
};

inline ChainWitness extract_builtin_chain(const std::string& name, ChainKind kind, int steps) {
  SymbolicModel sm = builtin_witness(name);
  Point root = builtin_target(name).second;
  SymbolicChainAdapter ad{sm, {}};
  return extract_chain(ad, root, kind, steps);
}

} // namespace modalwb
