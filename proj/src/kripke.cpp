#include "modalwb/kripke.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace modalwb {

WorldSet eval_model(const Model& m, const Formula& f) {
  const Frame2& fr = m.frame;
  const WorldSet all = fr.all_worlds();
  switch (f.kind()) {
    case Conn::Var: return m.truth_set(f.name());
    case Conn::Top: return all;
    case Conn::Bot: return 0;
    case Conn::Not: return all & ~eval_model(m, f.child());
    case Conn::And: return eval_model(m, f.child(0)) & eval_model(m, f.child(1));
    case Conn::Or: return eval_model(m, f.child(0)) | eval_model(m, f.child(1));
    case Conn::Imp:
      return (all & ~eval_model(m, f.child(0))) | eval_model(m, f.child(1));
    case Conn::Box: {
      WorldSet s = eval_model(m, f.child());
      WorldSet out = 0;
      for (int w = 0; w < fr.world_count; ++w)
        if ((fr.row(f.index(), w) & ~s) == 0) out |= WorldSet{1} << w;
      return out;
    }
    case Conn::Dia: {
      WorldSet s = eval_model(m, f.child());
      WorldSet out = 0;
      for (int w = 0; w < fr.world_count; ++w)
        if (fr.row(f.index(), w) & s) out |= WorldSet{1} << w;
      return out;
    }
    case Conn::BDia0:
    case Conn::BBox0:
      throw std::invalid_argument("eval_model requires a marker-free formula");
  }
  throw std::logic_error("unreachable");
}

bool condition_is_model_relative(FrameCondition c) {
  switch (c) {
    case FrameCondition::lcom_M:
    case FrameCondition::rcom_M:
    case FrameCondition::conf_M:
    case FrameCondition::wcon_minus_M: return true;
    default: return false;
  }
}

const char* condition_name(FrameCondition c) {
  switch (c) {
    case FrameCondition::weakly_connected_0: return "wcon0";
    case FrameCondition::wcon_minus_0: return "wconminus0";
    case FrameCondition::transitive_0: return "trans0";
    case FrameCondition::pseudo_transitive_1: return "ptrans1";
    case FrameCondition::lcom: return "lcom";
    case FrameCondition::rcom: return "rcom";
    case FrameCondition::conf: return "conf";
    case FrameCondition::one_step_rooted_1: return "onestep1";
    case FrameCondition::symmetric_1: return "sym1";
    case FrameCondition::lcom_M: return "lcom_m";
    case FrameCondition::rcom_M: return "rcom_m";
    case FrameCondition::conf_M: return "conf_m";
    case FrameCondition::wcon_minus_M: return "wconminus_m";
  }
  return "?";
}

std::optional<FrameCondition> condition_from_name(const std::string& name) {
  for (FrameCondition c :
       {FrameCondition::weakly_connected_0, FrameCondition::wcon_minus_0,
        FrameCondition::transitive_0, FrameCondition::pseudo_transitive_1,
        FrameCondition::lcom, FrameCondition::rcom, FrameCondition::conf,
        FrameCondition::one_step_rooted_1, FrameCondition::symmetric_1,
        FrameCondition::lcom_M, FrameCondition::rcom_M, FrameCondition::conf_M,
        FrameCondition::wcon_minus_M})
    if (name == condition_name(c)) return c;
  return std::nullopt;
}

namespace {

// exists u: x REL_a u and u REL_b y
bool has_two_step(const std::vector<WorldSet>& ra, const std::vector<WorldSet>& rb,
                  int n, int x, int y) {
  for (int u = 0; u < n; ++u)
    if (((ra[x] >> u) & 1) && ((rb[u] >> y) & 1)) return true;
  return false;
}

ConditionResult commutation_check(const std::vector<WorldSet>& first,
                                  const std::vector<WorldSet>& second, int n) {
  // forall x,y,z (x first y second z -> exists u: x second u first z)
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (!((first[x] >> y) & 1)) continue;
      for (int z = 0; z < n; ++z) {
        if (!((second[y] >> z) & 1)) continue;
        if (!has_two_step(second, first, n, x, z)) return {false, {x, y, z}};
      }
    }
  return {};
}

} // namespace

ConditionResult check_condition(const Frame2& fr, FrameCondition c,
                                const ConditionContext* ctx) {
  const int n = fr.world_count;
  if (condition_is_model_relative(c) && (!ctx || !ctx->model))
    throw std::invalid_argument("model-relative condition needs a (model, root) context");

  switch (c) {
    case FrameCondition::weakly_connected_0:
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          if (!fr.rel(0, x, y)) continue;
          for (int z = 0; z < n; ++z) {
            if (!fr.rel(0, x, z) || y == z) continue;
            if (!fr.rel(0, y, z) && !fr.rel(0, z, y)) return {false, {x, y, z}};
          }
        }
      return {};

    case FrameCondition::wcon_minus_0:
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          if (!fr.rel(0, x, y)) continue;
          for (int z = 0; z < n; ++z) {
            if (!fr.rel(0, x, z)) continue;
            if (fr.rel(0, y, z) || fr.rel(0, z, y) || fr.r0[y] == fr.r0[z]) continue;
            return {false, {x, y, z}};
          }
        }
      return {};

    case FrameCondition::transitive_0:
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          if (!fr.rel(0, x, y)) continue;
          if (fr.r0[y] & ~fr.r0[x]) {
            int z = std::countr_zero(fr.r0[y] & ~fr.r0[x]);
            return {false, {x, y, z}};
          }
        }
      return {};

    case FrameCondition::pseudo_transitive_1:
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          if (!fr.rel(1, x, y)) continue;
          for (int z = 0; z < n; ++z)
            if (fr.rel(1, y, z) && x != z && !fr.rel(1, x, z)) return {false, {x, y, z}};
        }
      return {};

    case FrameCondition::lcom: return commutation_check(fr.r0, fr.r1, n);
    case FrameCondition::rcom: return commutation_check(fr.r1, fr.r0, n);

    case FrameCondition::conf:
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          if (!fr.rel(1, x, y)) continue;
          for (int z = 0; z < n; ++z) {
            if (!fr.rel(0, x, z)) continue;
            bool ok = false;
            for (int u = 0; u < n && !ok; ++u)
              if (fr.rel(0, y, u) && fr.rel(1, z, u)) ok = true;
            if (!ok) return {false, {x, y, z}};
          }
        }
      return {};

    case FrameCondition::one_step_rooted_1: {
      for (int r = 0; r < n; ++r) {
        WorldSet others = fr.all_worlds() & ~(WorldSet{1} << r);
        if ((fr.r1[r] & others) == others) return {};
      }
      return {false, {0, 0, 0}};
    }

    case FrameCondition::symmetric_1:
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          if (fr.rel(1, x, y) && !fr.rel(1, y, x)) return {false, {x, y, -1}};
      return {};

    case FrameCondition::wcon_minus_M: {
      auto rb = tick_relation(*ctx->model);
      auto related = [&](int a, int b) { return (rb[a] >> b) & 1; };
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          if (!related(x, y)) continue;
          for (int z = 0; z < n; ++z) {
            if (!related(x, z)) continue;
            if (related(y, z) || related(z, y) || rb[y] == rb[z]) continue;
            return {false, {x, y, z}};
          }
        }
      return {};
    }

    case FrameCondition::lcom_M: {
      auto rb = tick_relation(*ctx->model);
      const int r = ctx->root;
      for (int y = 0; y < n; ++y) {
        if (!((rb[r] >> y) & 1)) continue;
        for (int z = 0; z < n; ++z) {
          if (!fr.rel(1, y, z)) continue;
          bool ok = false;
          for (int u = 0; u < n && !ok; ++u)
            if (fr.rel(1, r, u) && ((rb[u] >> z) & 1)) ok = true;
          if (!ok) return {false, {r, y, z}};
        }
      }
      return {};
    }

    case FrameCondition::rcom_M: {
      auto rb = tick_relation(*ctx->model);
      const int r = ctx->root;
      for (int x = 0; x < n; ++x) {
        if (!(x == r || fr.rel(0, r, x))) continue;
        for (int y = 0; y < n; ++y) {
          if (!fr.rel(1, x, y)) continue;
          for (int z = 0; z < n; ++z) {
            if (!((rb[y] >> z) & 1)) continue;
            bool ok = false;
            for (int u = 0; u < n && !ok; ++u)
              if (((rb[x] >> u) & 1) && fr.rel(1, u, z)) ok = true;
            if (!ok) return {false, {x, y, z}};
          }
        }
      }
      return {};
    }

    case FrameCondition::conf_M: {
      auto rb = tick_relation(*ctx->model);
      const int r = ctx->root;
      for (int x = 0; x < n; ++x) {
        if (!fr.rel(0, r, x)) continue;
        for (int z = 0; z < n; ++z) {
          if (!((rb[x] >> z) & 1)) continue;
          for (int y = 0; y < n; ++y) {
            if (!fr.rel(1, x, y)) continue;
            bool ok = false;
            for (int u = 0; u < n && !ok; ++u)
              if (((rb[y] >> u) & 1) && fr.rel(1, z, u)) ok = true;
            if (!ok) return {false, {x, y, z}};
          }
        }
      }
      return {};
    }
  }
  throw std::logic_error("unreachable");
}

Frame2 product_frame(const Frame1& f0, const Frame1& f1) {
  const int n0 = f0.world_count, n1 = f1.world_count;
  const int n = n0 * n1;
  if (n > 64) throw std::invalid_argument("product frame exceeds 64 worlds");
  std::vector<WorldSet> r0(n, 0), r1(n, 0);
  for (int u = 0; u < n0; ++u)
    for (int v = 0; v < n1; ++v) {
      const int w = u * n1 + v;
      for (int u2 = 0; u2 < n0; ++u2)
        if (f0.related(u, u2)) r0[w] |= WorldSet{1} << (u2 * n1 + v);
      for (int v2 = 0; v2 < n1; ++v2)
        if (f1.related(v, v2)) r1[w] |= WorldSet{1} << (u * n1 + v2);
    }
  return Frame2(n, std::move(r0), std::move(r1));
}

std::vector<WorldSet> tick_relation(const Model& m) {
  const Frame2& fr = m.frame;
  const int n = fr.world_count;
  const WorldSet t = m.truth_set("t");
  std::vector<WorldSet> out(n, 0);
  for (int x = 0; x < n; ++x) {
    const WorldSet flip = fr.r0[x] & (((t >> x) & 1) ? ~t : t);
    WorldSet row = flip;
    WorldSet rest = flip;
    while (rest) {
      int z = std::countr_zero(rest);
      rest &= rest - 1;
      row |= fr.r0[z];
    }
    out[x] = row & fr.all_worlds();
  }
  return out;
}

ValidityResult frame_validates(const Frame2& fr, const Formula& f) {
  auto vars = variables(f);
  const int n = fr.world_count;
  const int v = static_cast<int>(vars.size());
  if (v > 3 || n > 12 || static_cast<long long>(v) * n > 26)
    throw std::invalid_argument("frame_validates: size bound exceeded");

  std::vector<std::string> names(vars.begin(), vars.end());
  const std::uint64_t total = std::uint64_t{1} << (v * n);
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    Model m;
    m.frame = fr;
    for (int i = 0; i < v; ++i)
      m.valuation[names[i]] = (bits >> (i * n)) & fr.all_worlds();
    WorldSet truth = eval_model(m, f);
    if (truth != fr.all_worlds()) {
      int w = std::countr_zero(fr.all_worlds() & ~truth);
      return {false, std::move(m), w};
    }
  }
  return {};
}

namespace {

struct PMorphSearch {
  const Frame2& src;
  const Frame2& dst;
  std::vector<int> order; // source worlds, most constrained first
  std::vector<int> map;   // -1 = unassigned

  bool forth_ok(int x) const {
    for (int y = 0; y < src.world_count; ++y) {
      if (map[y] < 0) continue;
      for (int idx = 0; idx < 2; ++idx) {
        if (src.rel(idx, x, y) && !dst.rel(idx, map[x], map[y])) return false;
        if (src.rel(idx, y, x) && !dst.rel(idx, map[y], map[x])) return false;
      }
    }
    return true;
  }

  bool back_ok() const {
    for (int x = 0; x < src.world_count; ++x)
      for (int idx = 0; idx < 2; ++idx)
        for (int b = 0; b < dst.world_count; ++b) {
          if (!dst.rel(idx, map[x], b)) continue;
          bool ok = false;
          for (int y = 0; y < src.world_count && !ok; ++y)
            if (src.rel(idx, x, y) && map[y] == b) ok = true;
          if (!ok) return false;
        }
    return true;
  }

  bool surjective() const {
    std::vector<bool> hit(dst.world_count, false);
    for (int x = 0; x < src.world_count; ++x) hit[map[x]] = true;
    return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
  }

  bool dfs(std::size_t i) {
    if (i == order.size()) return surjective() && back_ok();
    const int x = order[i];
    // image-degree feasibility: x's successors can't exceed what any image
    // offers only in the sense that an image with no successors can't host
    // a world with successors (forward preservation would fail later anyway,
    // but pruning here cuts the tree early)
    for (int b = 0; b < dst.world_count; ++b) {
      map[x] = b;
      if (forth_ok(x) && dfs(i + 1)) return true;
      map[x] = -1;
    }
    return false;
  }
};

} // namespace

std::optional<std::vector<int>> p_morphism_search(const Frame2& src, const Frame2& dst) {
  if (src.world_count > 16)
    throw std::invalid_argument("p_morphism_search: size bound exceeded");

  // quick necessary check: if some source world has no idx-successor but every
  // destination world has one, no map exists (and vice versa combinations are
  // handled by the search)
  PMorphSearch s{src, dst, {}, std::vector<int>(src.world_count, -1)};
  s.order.resize(src.world_count);
  std::iota(s.order.begin(), s.order.end(), 0);
  std::sort(s.order.begin(), s.order.end(), [&](int a, int b) {
    auto deg = [&](int w) {
      return std::popcount(src.r0[w]) + std::popcount(src.r1[w]);
    };
    return deg(a) > deg(b);
  });
  if (s.dfs(0)) return s.map;
  return std::nullopt;
}

} // namespace modalwb
