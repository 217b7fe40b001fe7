#include "modalwb/prober.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <numeric>
#include <stdexcept>

#ifdef MODALWB_OPENMP
#include <omp.h>
#endif

namespace modalwb {

namespace {

std::vector<WorldSet> rows_from_bits(std::uint64_t bits, int n) {
  std::vector<WorldSet> rows(n, 0);
  for (int x = 0; x < n; ++x)
    rows[x] = (bits >> (x * n)) & ((WorldSet{1} << n) - 1);
  return rows;
}

std::uint64_t bits_from_rows(const std::vector<WorldSet>& rows, int n) {
  std::uint64_t bits = 0;
  for (int x = 0; x < n; ++x) bits |= rows[x] << (x * n);
  return bits;
}

bool touches_only_r0(FrameCondition c) {
  return c == FrameCondition::weakly_connected_0 || c == FrameCondition::wcon_minus_0 ||
         c == FrameCondition::transitive_0;
}

bool touches_only_r1(FrameCondition c) {
  return c == FrameCondition::pseudo_transitive_1 ||
         c == FrameCondition::one_step_rooted_1 || c == FrameCondition::symmetric_1;
}

int resolve_jobs(int jobs) {
#ifdef MODALWB_OPENMP
  if (jobs <= 0) return omp_get_max_threads();
  return jobs;
#else
  (void)jobs;
  return 1;
#endif
}

} // namespace

bool FrameClassSpec::in_class(const Frame2& fr) const {
  for (FrameCondition c : conditions) {
    if (condition_is_model_relative(c))
      throw std::invalid_argument("model-relative condition in a frame class");
    if (!check_condition(fr, c)) return false;
  }
  return true;
}

std::uint64_t frame_iso_canonical_key(const Frame2& fr) {
  const int n = fr.world_count;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t best = ~std::uint64_t{0};
  do {
    std::uint64_t key = 0;
    int bitpos = 0;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        key |= std::uint64_t{fr.rel(0, perm[x], perm[y])} << bitpos++;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        key |= std::uint64_t{fr.rel(1, perm[x], perm[y])} << bitpos++;
    best = std::min(best, key);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

bool frame_is_iso_canonical(const Frame2& fr) {
  const int n = fr.world_count;
  std::uint64_t own = 0;
  int bitpos = 0;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) own |= std::uint64_t{fr.rel(0, x, y)} << bitpos++;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) own |= std::uint64_t{fr.rel(1, x, y)} << bitpos++;
  return own == frame_iso_canonical_key(fr);
}

void enumerate_frames(int n, const FrameClassSpec& spec,
                      const std::function<void(const Frame2&)>& visit, bool dedup_iso) {
  if (n < 1 || n > 5) throw std::invalid_argument("enumerate_frames: size bound exceeded");
  const std::uint64_t rel_count = std::uint64_t{1} << (n * n);

  std::vector<FrameCondition> r0_only, r1_only, joint;
  for (FrameCondition c : spec.conditions) {
    if (touches_only_r0(c)) r0_only.push_back(c);
    else if (touches_only_r1(c)) r1_only.push_back(c);
    else joint.push_back(c);
  }

  // r1 candidates filtered once by their unary conditions
  std::vector<std::uint64_t> r1_pool;
  r1_pool.reserve(rel_count);
  for (std::uint64_t b1 = 0; b1 < rel_count; ++b1) {
    Frame2 probe(n, rows_from_bits(0, n), rows_from_bits(b1, n));
    bool ok = true;
    for (FrameCondition c : r1_only)
      if (!check_condition(probe, c)) { ok = false; break; }
    if (ok) r1_pool.push_back(b1);
  }

  for (std::uint64_t b0 = 0; b0 < rel_count; ++b0) {
    Frame2 fr(n, rows_from_bits(b0, n), rows_from_bits(0, n));
    bool ok = true;
    for (FrameCondition c : r0_only)
      if (!check_condition(fr, c)) { ok = false; break; }
    if (!ok) continue;
    for (std::uint64_t b1 : r1_pool) {
      fr.r1 = rows_from_bits(b1, n);
      bool in = true;
      for (FrameCondition c : joint)
        if (!check_condition(fr, c)) { in = false; break; }
      if (!in) continue;
      if (dedup_iso && !frame_is_iso_canonical(fr)) continue;
      visit(fr);
    }
  }
}

SatResult frame_satisfiable(const Frame2& fr, const Formula& f) {
  auto vars = variables(f);
  const int n = fr.world_count;
  const int v = static_cast<int>(vars.size());
  if (static_cast<long long>(v) * n > 24)
    throw std::invalid_argument("frame_satisfiable: size bound exceeded");

  std::vector<std::string> names(vars.begin(), vars.end());
  const std::uint64_t total = std::uint64_t{1} << (v * n);
  Model m;
  m.frame = fr;
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    for (int i = 0; i < v; ++i)
      m.valuation[names[i]] = (bits >> (i * n)) & fr.all_worlds();
    WorldSet truth = eval_model(m, f);
    if (truth) return {true, m, std::countr_zero(truth)};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Random in-class generation

namespace {

std::vector<WorldSet> random_relation(int n, Rng& rng) {
  std::vector<WorldSet> rows(n, 0);
  for (int x = 0; x < n; ++x) rows[x] = rng.next() & ((WorldSet{1} << n) - 1);
  return rows;
}

void transitive_close(std::vector<WorldSet>& r, int n) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int x = 0; x < n; ++x) {
      WorldSet row = r[x];
      WorldSet rest = row;
      while (rest) {
        int y = std::countr_zero(rest);
        rest &= rest - 1;
        row |= r[y];
      }
      if (row != r[x]) { r[x] = row; changed = true; }
    }
  }
}

// Saturate weak connectedness by relating incomparable successor pairs along
// the given linear order.
void wcon_saturate(std::vector<WorldSet>& r, int n, const std::vector<int>& order_pos) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int x = 0; x < n; ++x) {
      WorldSet succ = r[x];
      for (int y = 0; y < n; ++y) {
        if (!((succ >> y) & 1)) continue;
        for (int z = y + 1; z < n; ++z) {
          if (!((succ >> z) & 1)) continue;
          if (((r[y] >> z) & 1) || ((r[z] >> y) & 1)) continue;
          if (order_pos[y] < order_pos[z]) r[y] |= WorldSet{1} << z;
          else r[z] |= WorldSet{1} << y;
          changed = true;
        }
      }
    }
  }
}

bool has(const std::vector<FrameCondition>& cs, FrameCondition c) {
  return std::find(cs.begin(), cs.end(), c) != cs.end();
}

} // namespace

Frame2 random_in_class_frame(int n, const FrameClassSpec& spec, Rng& rng) {
  const bool want_trans = has(spec.conditions, FrameCondition::transitive_0);
  const bool want_wcon = has(spec.conditions, FrameCondition::weakly_connected_0) ||
                         has(spec.conditions, FrameCondition::wcon_minus_0);
  const bool want_ptrans = has(spec.conditions, FrameCondition::pseudo_transitive_1);
  const bool want_lcom = has(spec.conditions, FrameCondition::lcom);
  const bool want_rcom = has(spec.conditions, FrameCondition::rcom);
  const bool want_conf = has(spec.conditions, FrameCondition::conf);

  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<WorldSet> r0 = random_relation(n, rng);

    if (want_wcon) {
      std::vector<int> order_pos(n);
      std::iota(order_pos.begin(), order_pos.end(), 0);
      for (int i = n - 1; i > 0; --i)
        std::swap(order_pos[i], order_pos[rng.below(i + 1)]);
      // repairs can interact: closing transitively may expose new
      // incomparable successor pairs and vice versa
      for (int round = 0; round < 2 * n * n; ++round) {
        if (want_trans) transitive_close(r0, n);
        wcon_saturate(r0, n, order_pos);
        Frame2 probe(n, r0, std::vector<WorldSet>(n, 0));
        bool t_ok = !want_trans || bool(check_condition(probe, FrameCondition::transitive_0));
        bool w_ok = bool(check_condition(probe, FrameCondition::weakly_connected_0));
        if (t_ok && w_ok) break;
      }
    } else if (want_trans) {
      transitive_close(r0, n);
    }

    std::vector<WorldSet> r1 = random_relation(n, rng);
    Frame2 fr(n, std::move(r0), std::move(r1));

    // saturation: every repair adds an r1 edge or a reflexive r0 edge, both
    // of which preserve transitivity and weak connectedness of r0
    bool progress = true;
    while (progress) {
      progress = false;
      if (want_ptrans) {
        auto res = check_condition(fr, FrameCondition::pseudo_transitive_1);
        if (!res) {
          fr.r1[res.witness[0]] |= WorldSet{1} << res.witness[2];
          progress = true;
          continue;
        }
      }
      if (want_lcom) {
        auto res = check_condition(fr, FrameCondition::lcom);
        if (!res) { // x r0 y r1 z, no u with x r1 u r0 z: take u = z
          int x = res.witness[0], z = res.witness[2];
          fr.r1[x] |= WorldSet{1} << z;
          fr.r0[z] |= WorldSet{1} << z;
          progress = true;
          continue;
        }
      }
      if (want_rcom) {
        auto res = check_condition(fr, FrameCondition::rcom);
        if (!res) { // x r1 y r0 z, no u with x r0 u r1 z: take u = x
          int x = res.witness[0], z = res.witness[2];
          fr.r0[x] |= WorldSet{1} << x;
          fr.r1[x] |= WorldSet{1} << z;
          progress = true;
          continue;
        }
      }
      if (want_conf) {
        auto res = check_condition(fr, FrameCondition::conf);
        if (!res) { // x r1 y, x r0 z, no u with y r0 u, z r1 u: take u = y
          int y = res.witness[1], z = res.witness[2];
          fr.r0[y] |= WorldSet{1} << y;
          fr.r1[z] |= WorldSet{1} << y;
          progress = true;
          continue;
        }
      }
    }

    if (spec.in_class(fr)) return fr;
  }
  throw std::runtime_error("random_in_class_frame: rejection sampling exhausted");
}

Model random_model(const Frame2& fr, const std::vector<std::string>& vars, Rng& rng) {
  Model m;
  m.frame = fr;
  for (const auto& v : vars) m.valuation[v] = rng.next() & fr.all_worlds();
  return m;
}

// ---------------------------------------------------------------------------
// Campaigns

namespace {

void record_sat(SizeRecord& rec, const Frame2& fr, const SatResult& sat) {
  ++rec.satisfiable_count;
  if (!rec.has_counterexample) {
    rec.has_counterexample = true;
    rec.counterexample_frame = fr;
    rec.counterexample_model = sat.model;
    rec.counterexample_world = sat.world;
  }
}

// Exhaustive sweep over one size; worker w handles r0 candidates with
// index % workers == w, partial records merge by worker index.
SizeRecord exhaustive_size_record(const Formula& f, const FrameClassSpec& spec, int n,
                                  bool dedup_iso, int jobs) {
  SizeRecord total;
  total.size = n;
  const std::uint64_t rel_count = std::uint64_t{1} << (n * n);

  std::vector<FrameCondition> r0_only, r1_only, joint;
  for (FrameCondition c : spec.conditions) {
    if (touches_only_r0(c)) r0_only.push_back(c);
    else if (touches_only_r1(c)) r1_only.push_back(c);
    else joint.push_back(c);
  }

  std::vector<std::uint64_t> r0_pool;
  for (std::uint64_t b0 = 0; b0 < rel_count; ++b0) {
    Frame2 probe(n, rows_from_bits(b0, n), rows_from_bits(0, n));
    bool ok = true;
    for (FrameCondition c : r0_only)
      if (!check_condition(probe, c)) { ok = false; break; }
    if (ok) r0_pool.push_back(b0);
  }
  std::vector<std::uint64_t> r1_pool;
  for (std::uint64_t b1 = 0; b1 < rel_count; ++b1) {
    Frame2 probe(n, rows_from_bits(0, n), rows_from_bits(b1, n));
    bool ok = true;
    for (FrameCondition c : r1_only)
      if (!check_condition(probe, c)) { ok = false; break; }
    if (ok) r1_pool.push_back(b1);
  }

  const int workers = std::max(1, jobs);
  std::vector<SizeRecord> partial(workers);

#ifdef MODALWB_OPENMP
#pragma omp parallel for num_threads(workers) schedule(static, 1)
#endif
  for (int w = 0; w < workers; ++w) {
    SizeRecord rec;
    rec.size = n;
    for (std::size_t i = w; i < r0_pool.size(); i += workers) {
      Frame2 fr(n, rows_from_bits(r0_pool[i], n), {});
      for (std::uint64_t b1 : r1_pool) {
        fr.r1 = rows_from_bits(b1, n);
        bool in = true;
        for (FrameCondition c : joint)
          if (!check_condition(fr, c)) { in = false; break; }
        if (!in) continue;
        if (dedup_iso && !frame_is_iso_canonical(fr)) continue;
        ++rec.frames_in_class;
        SatResult sat = frame_satisfiable(fr, f);
        if (sat.satisfiable) record_sat(rec, fr, sat);
      }
    }
    partial[w] = std::move(rec);
  }

  total.frames_enumerated = rel_count * rel_count;
  for (const auto& rec : partial) {
    total.frames_in_class += rec.frames_in_class;
    total.satisfiable_count += rec.satisfiable_count;
    if (rec.has_counterexample && !total.has_counterexample) {
      total.has_counterexample = true;
      total.counterexample_frame = rec.counterexample_frame;
      total.counterexample_model = rec.counterexample_model;
      total.counterexample_world = rec.counterexample_world;
    }
  }
  return total;
}

SizeRecord random_size_record(const Formula& f, const FrameClassSpec& spec, int n,
                              std::uint64_t samples, std::uint64_t seed, int jobs) {
  const int workers = std::max(1, jobs);
  std::vector<SizeRecord> partial(workers);

#ifdef MODALWB_OPENMP
#pragma omp parallel for num_threads(workers) schedule(static, 1)
#endif
  for (int w = 0; w < workers; ++w) {
    SizeRecord rec;
    rec.size = n;
    for (std::uint64_t i = w; i < samples; i += workers) {
      Rng rng = Rng::for_sample(seed ^ (std::uint64_t{1} << 32) * n, i);
      Frame2 fr = random_in_class_frame(n, spec, rng);
      ++rec.frames_enumerated;
      ++rec.frames_in_class;
      SatResult sat = frame_satisfiable(fr, f);
      if (sat.satisfiable) record_sat(rec, fr, sat);
    }
    partial[w] = std::move(rec);
  }

  SizeRecord total;
  total.size = n;
  for (const auto& rec : partial) {
    total.frames_enumerated += rec.frames_enumerated;
    total.frames_in_class += rec.frames_in_class;
    total.satisfiable_count += rec.satisfiable_count;
    if (rec.has_counterexample && !total.has_counterexample) {
      total.has_counterexample = true;
      total.counterexample_frame = rec.counterexample_frame;
      total.counterexample_model = rec.counterexample_model;
      total.counterexample_world = rec.counterexample_world;
    }
  }
  return total;
}

// product_only mode: component pairs with sizes up to max_size each
SizeRecord product_size_record(const Formula& f, const FrameClassSpec& spec, int n0,
                               int n1, int jobs) {
  auto component_ok = [&](const Frame1& c, const std::vector<FrameCondition>& conds) {
    Frame2 as2(c.world_count, c.r, c.r);
    for (FrameCondition cond : conds)
      if (!check_condition(as2, cond)) return false;
    return true;
  };

  const std::uint64_t count0 = std::uint64_t{1} << (n0 * n0);
  const std::uint64_t count1 = std::uint64_t{1} << (n1 * n1);

  std::vector<std::uint64_t> pool0, pool1;
  for (std::uint64_t b = 0; b < count0; ++b)
    if (component_ok(Frame1(n0, rows_from_bits(b, n0)), spec.first_component))
      pool0.push_back(b);
  for (std::uint64_t b = 0; b < count1; ++b)
    if (component_ok(Frame1(n1, rows_from_bits(b, n1)), spec.second_component))
      pool1.push_back(b);

  const int workers = std::max(1, jobs);
  std::vector<SizeRecord> partial(workers);

#ifdef MODALWB_OPENMP
#pragma omp parallel for num_threads(workers) schedule(static, 1)
#endif
  for (int w = 0; w < workers; ++w) {
    SizeRecord rec;
    for (std::size_t i = w; i < pool0.size(); i += workers) {
      Frame1 f0(n0, rows_from_bits(pool0[i], n0));
      for (std::uint64_t b1 : pool1) {
        Frame1 f1(n1, rows_from_bits(b1, n1));
        Frame2 fr = product_frame(f0, f1);
        bool in = true;
        for (FrameCondition c : spec.conditions)
          if (!check_condition(fr, c)) { in = false; break; }
        if (!in) continue;
        ++rec.frames_in_class;
        SatResult sat = frame_satisfiable(fr, f);
        if (sat.satisfiable) record_sat(rec, fr, sat);
      }
    }
    partial[w] = std::move(rec);
  }

  SizeRecord total;
  total.size = n0 * 10 + n1; // component sizes, not world count
  total.frames_enumerated = count0 * count1;
  for (const auto& rec : partial) {
    total.frames_in_class += rec.frames_in_class;
    total.satisfiable_count += rec.satisfiable_count;
    if (rec.has_counterexample && !total.has_counterexample) {
      total.has_counterexample = true;
      total.counterexample_frame = rec.counterexample_frame;
      total.counterexample_model = rec.counterexample_model;
      total.counterexample_world = rec.counterexample_world;
    }
  }
  return total;
}

CampaignReport run_campaign(const Formula& f, const std::string& formula_name,
                            const FrameClassSpec& spec, const CampaignOptions& opt,
                            int jobs) {
  auto t0 = std::chrono::steady_clock::now();
  CampaignReport rep;
  rep.formula_name = formula_name;
  for (FrameCondition c : spec.conditions) rep.class_names.push_back(condition_name(c));
  rep.seed = opt.seed;
  rep.samples = opt.samples;

  if (spec.product_only) {
    rep.mode = "product";
    for (int n0 = 1; n0 <= opt.max_size; ++n0)
      for (int n1 = 1; n1 <= opt.max_size; ++n1)
        rep.per_size.push_back(product_size_record(f, spec, n0, n1, jobs));
  } else if (opt.mode == CampaignMode::Exhaustive) {
    rep.mode = "exhaustive";
    if (opt.max_size > (opt.dedup_iso ? 5 : 4))
      throw std::invalid_argument("unsat_campaign: exhaustive size bound exceeded");
    for (int n = 1; n <= opt.max_size; ++n)
      rep.per_size.push_back(exhaustive_size_record(f, spec, n, opt.dedup_iso, jobs));
  } else {
    rep.mode = "random";
    for (int n = 1; n <= opt.max_size; ++n)
      rep.per_size.push_back(random_size_record(f, spec, n, opt.samples, opt.seed, jobs));
  }

  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

} // namespace

CampaignReport unsat_campaign(const Formula& f, const std::string& formula_name,
                              const FrameClassSpec& spec, const CampaignOptions& opt) {
  return run_campaign(f, formula_name, spec, opt, resolve_jobs(opt.jobs));
}

CampaignReport unsat_campaign_serial(const Formula& f, const std::string& formula_name,
                                     const FrameClassSpec& spec,
                                     const CampaignOptions& opt) {
  return run_campaign(f, formula_name, spec, opt, 1);
}

// ---------------------------------------------------------------------------
// Claim tests

const char* claim_name(ClaimKind c) {
  switch (c) {
    case ClaimKind::Trans: return "trans";
    case ClaimKind::Wcon: return "wcon";
    case ClaimKind::CommL: return "comm_l";
    case ClaimKind::CommR: return "comm_r";
    case ClaimKind::CommC: return "comm_c";
    case ClaimKind::DiaSemantics: return "dia_semantics";
  }
  return "?";
}

std::optional<ClaimKind> claim_from_name(const std::string& name) {
  for (ClaimKind c : {ClaimKind::Trans, ClaimKind::Wcon, ClaimKind::CommL,
                      ClaimKind::CommR, ClaimKind::CommC, ClaimKind::DiaSemantics})
    if (name == claim_name(c)) return c;
  return std::nullopt;
}

namespace {

bool subrelation(const std::vector<WorldSet>& a, const std::vector<WorldSet>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

std::vector<WorldSet> compose(const std::vector<WorldSet>& a,
                              const std::vector<WorldSet>& b, int n) {
  std::vector<WorldSet> out(n, 0);
  for (int x = 0; x < n; ++x) {
    WorldSet rest = a[x];
    while (rest) {
      int y = std::countr_zero(rest);
      rest &= rest - 1;
      out[x] |= b[y];
    }
  }
  return out;
}

Formula random_formula(Rng& rng, int depth) {
  if (depth == 0 || rng.below(4) == 0) {
    switch (rng.below(4)) {
      case 0: return Formula::var("p");
      case 1: return Formula::var("q");
      case 2: return Formula::var("t");
      default: return Formula::top();
    }
  }
  switch (rng.below(6)) {
    case 0: return Formula::neg(random_formula(rng, depth - 1));
    case 1:
      return Formula::conj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 2:
      return Formula::disj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 3: return Formula::box(rng.coin(), random_formula(rng, depth - 1));
    case 4: return Formula::dia(rng.coin(), random_formula(rng, depth - 1));
    default:
      return Formula::imp(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
  }
}

// one claim sample; returns detail string on violation, empty on pass,
// "discard" when hypotheses could not be met
std::string claim_sample(ClaimKind claim, Rng& rng, Model& out_model) {
  const int n = 1 + static_cast<int>(rng.below(6));

  switch (claim) {
    case ClaimKind::Trans: {
      std::vector<WorldSet> r0 = random_relation(n, rng);
      transitive_close(r0, n);
      Frame2 fr(n, std::move(r0), random_relation(n, rng));
      Model m = random_model(fr, {"p", "t"}, rng);
      auto rb = tick_relation(m);
      Frame2 rb_frame(n, rb, rb);
      out_model = m;
      if (!check_condition(rb_frame, FrameCondition::transitive_0))
        return "tick relation not transitive";
      if (!subrelation(rb, fr.r0)) return "tick relation not contained in r0";
      if (!subrelation(compose(fr.r0, rb, n), rb)) return "r0 o tick not contained in tick";
      if (!subrelation(compose(rb, fr.r0, n), rb)) return "tick o r0 not contained in tick";
      return {};
    }

    case ClaimKind::Wcon: {
      FrameClassSpec cls;
      cls.conditions = {FrameCondition::transitive_0, FrameCondition::weakly_connected_0};
      Frame2 fr = random_in_class_frame(n, cls, rng);
      Model m = random_model(fr, {"p", "t"}, rng);
      out_model = m;
      ConditionContext ctx{&m, 0};
      if (!check_condition(fr, FrameCondition::wcon_minus_M, &ctx))
        return "wcon- fails for the tick relation";
      return {};
    }

    case ClaimKind::CommL:
    case ClaimKind::CommR:
    case ClaimKind::CommC: {
      FrameClassSpec cls;
      cls.conditions = {FrameCondition::transitive_0, FrameCondition::lcom,
                        FrameCondition::rcom, FrameCondition::conf};
      Frame2 fr = random_in_class_frame(n, cls, rng);
      Model m = random_model(fr, {"p", "t"}, rng);
      const int root = static_cast<int>(rng.below(n));
      WorldSet guard = eval_model(m, corpus("tick_guard"));
      if (!((guard >> root) & 1)) return "discard";
      out_model = m;
      ConditionContext ctx{&m, root};
      FrameCondition goal = claim == ClaimKind::CommL  ? FrameCondition::lcom_M
                            : claim == ClaimKind::CommR ? FrameCondition::rcom_M
                                                        : FrameCondition::conf_M;
      if (!check_condition(fr, goal, &ctx))
        return std::string(condition_name(goal)) + " fails at the sampled root";
      return {};
    }

    case ClaimKind::DiaSemantics: {
      Frame2 fr(n, random_relation(n, rng), random_relation(n, rng));
      Model m = random_model(fr, {"p", "q", "t"}, rng);
      out_model = m;
      Formula psi = random_formula(rng, 2);
      WorldSet truth = eval_model(m, tick_expand(Formula::bdia0(psi)));
      WorldSet target = eval_model(m, psi);
      auto rb = tick_relation(m);
      WorldSet expect = 0;
      for (int x = 0; x < n; ++x)
        if (rb[x] & target) expect |= WorldSet{1} << x;
      if (truth != expect) return "tick diamond disagrees with its derived relation";
      return {};
    }
  }
  return "unreachable";
}

} // namespace

ClaimReport claim_test(ClaimKind claim, std::uint64_t samples, std::uint64_t seed,
                       int jobs) {
  auto t0 = std::chrono::steady_clock::now();
  const int workers = std::max(1, resolve_jobs(jobs));
  std::vector<ClaimReport> partial(workers);

#ifdef MODALWB_OPENMP
#pragma omp parallel for num_threads(workers) schedule(static, 1)
#endif
  for (int w = 0; w < workers; ++w) {
    ClaimReport rec;
    for (std::uint64_t i = w; i < samples; i += workers) {
      Rng rng = Rng::for_sample(seed, i);
      Model m;
      std::string detail = claim_sample(claim, rng, m);
      if (detail == "discard") {
        ++rec.discarded;
      } else if (!detail.empty()) {
        ++rec.violations;
        if (!rec.has_violation) {
          rec.has_violation = true;
          rec.violating_model = m;
          rec.violation_detail = detail;
        }
      }
    }
    partial[w] = std::move(rec);
  }

  ClaimReport rep;
  rep.kind = claim;
  rep.samples = samples;
  rep.seed = seed;
  for (const auto& rec : partial) {
    rep.violations += rec.violations;
    rep.discarded += rec.discarded;
    if (rec.has_violation && !rep.has_violation) {
      rep.has_violation = true;
      rep.violating_model = rec.violating_model;
      rep.violation_detail = rec.violation_detail;
    }
  }
  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

} // namespace modalwb
