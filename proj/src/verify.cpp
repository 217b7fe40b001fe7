#include "modalwb/verify.hpp"

#include <functional>
#include <set>
#include <string>

#include "modalwb/adapters.hpp"
#include "modalwb/chain.hpp"
#include "modalwb/formula.hpp"
#include "modalwb/kripke.hpp"
#include "modalwb/omega.hpp"
#include "modalwb/prober.hpp"
#include "modalwb/rng.hpp"

namespace modalwb {

namespace {

FrameClassSpec make_spec(std::initializer_list<FrameCondition> conds) {
  FrameClassSpec s;
  s.conditions = conds;
  return s;
}

bool campaign_clean(const Formula& f, const char* name, const FrameClassSpec& spec,
                    CampaignOptions opt) {
  CampaignReport rep = unsat_campaign(f, name, spec, opt);
  return rep.total_satisfiable() == 0;
}

// random formula over small vocabulary, marker nodes included
Formula rand_formula(Rng& rng, int depth) {
  static const char* vars[] = {"p", "q", "t"};
  if (depth == 0 || rng.below(5) == 0) {
    switch (rng.below(5)) {
    case 0: return Formula::top();
    case 1: return Formula::bot();
    default: return Formula::var(vars[rng.below(3)]);
    }
  }
  switch (rng.below(9)) {
  case 0: return Formula::neg(rand_formula(rng, depth - 1));
  case 1: return Formula::conj(rand_formula(rng, depth - 1), rand_formula(rng, depth - 1));
  case 2: return Formula::disj(rand_formula(rng, depth - 1), rand_formula(rng, depth - 1));
  case 3: return Formula::imp(rand_formula(rng, depth - 1), rand_formula(rng, depth - 1));
  case 4: return Formula::box(static_cast<int>(rng.below(2)), rand_formula(rng, depth - 1));
  case 5: return Formula::dia(static_cast<int>(rng.below(2)), rand_formula(rng, depth - 1));
  case 6: return Formula::bdia0(rand_formula(rng, depth - 1));
  case 7: return Formula::bbox0(rand_formula(rng, depth - 1));
  default: return Formula::var(vars[rng.below(3)]);
  }
}

// every single relation on n <= bound worlds
void each_frame1(int bound, const std::function<void(const Frame1&)>& visit) {
  for (int n = 1; n <= bound; ++n) {
    std::uint64_t total = std::uint64_t{1} << (n * n);
    for (std::uint64_t bits = 0; bits < total; ++bits) {
      std::vector<WorldSet> rel(static_cast<std::size_t>(n), 0);
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          if ((bits >> (x * n + y)) & 1) rel[static_cast<std::size_t>(x)] |= WorldSet{1} << y;
      visit(Frame1(n, std::move(rel)));
    }
  }
}

Frame2 f_sharp() {
  // two points x=0, y=1 with r0 = {xx, xy, yy} and r1 = everything
  return Frame2(2, {0b01 | 0b10, 0b10}, {0b11, 0b11});
}

} // namespace

VerifyResult verify_all(std::ostream& out, int jobs) {
  VerifyResult res;
  auto run = [&](int num, const std::string& what, const std::function<bool()>& fn) {
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      out << "     criterion " << num << " raised: " << e.what() << "\n";
    }
    out << (ok ? "PASS" : "FAIL") << "  " << num << "  " << what << "\n";
    out.flush();
    res.criteria.emplace_back(what, ok);
  };

  const FrameClassSpec th1 = make_spec({FrameCondition::weakly_connected_0, FrameCondition::lcom,
                                        FrameCondition::rcom, FrameCondition::conf});
  const FrameClassSpec th2 =
      make_spec({FrameCondition::transitive_0, FrameCondition::weakly_connected_0,
                 FrameCondition::lcom, FrameCondition::rcom, FrameCondition::conf});
  const FrameClassSpec th3 = make_spec({FrameCondition::weakly_connected_0,
                                        FrameCondition::pseudo_transitive_1,
                                        FrameCondition::lcom});

  run(1, "phi_inf unsatisfiable: exhaustive sizes 1-3, then 2x10^6 random in-class samples at sizes 4-5",
      [&] {
        CampaignOptions ex;
        ex.max_size = 3;
        ex.jobs = jobs;
        if (!campaign_clean(corpus("phi_inf"), "phi_inf", th1, ex)) return false;
        CampaignOptions rnd;
        rnd.mode = CampaignMode::Random;
        rnd.max_size = 5;
        rnd.samples = 1000000;
        rnd.seed = 0x90125;
        rnd.jobs = jobs;
        CampaignReport rep = unsat_campaign(corpus("phi_inf"), "phi_inf", th1, rnd);
        std::uint64_t big_sampled = 0;
        for (const SizeRecord& r : rep.per_size)
          if (r.size >= 4) big_sampled += r.frames_in_class;
        return rep.total_satisfiable() == 0 && big_sampled >= 1000000;
      });

  run(2, "phi_inf_bullet unsatisfiable on transitive frames: exhaustive sizes 1-3", [&] {
    CampaignOptions ex;
    ex.max_size = 3;
    ex.jobs = jobs;
    return campaign_clean(tick_expand(corpus("phi_inf_bullet")), "phi_inf_bullet", th2, ex);
  });

  run(3, "psi_inf unsatisfiable: exhaustive sizes 1-3", [&] {
    CampaignOptions ex;
    ex.max_size = 3;
    ex.jobs = jobs;
    return campaign_clean(corpus("psi_inf"), "psi_inf", th3, ex);
  });

  run(4, "all six built-in witnesses satisfy their formulas; certificates re-verify", [&] {
    for (const std::string& name : builtin_witness_names()) {
      SymbolicModel sm = builtin_witness(name);
      auto [fname, target] = builtin_target(name);
      auto [region, cert] = eval_symbolic(sm, tick_expand(corpus(fname)));
      if (!region_member(region, target, sm.family)) return false;
      if (!certificate_valid(cert, sm)) return false;
    }
    return true;
  });

  run(5, "25-step chain extraction on lemma_satone (phi) and lemma_sattwo (psi)", [&] {
    for (auto [name, kind] : {std::pair{"lemma_satone", ChainKind::Phi},
                              std::pair{"lemma_sattwo", ChainKind::Psi}}) {
      ChainWitness w = extract_builtin_chain(name, kind, 25);
      if (w.steps.size() != 25 || !w.all_checks_pass()) return false;
      std::set<std::string> seen;
      for (const ChainStep& s : w.steps)
        if (!seen.insert(s.u).second) return false;
    }
    return true;
  });

  run(6, "claim tests at 10^4 samples each: zero violations", [&] {
    for (ClaimKind ck : {ClaimKind::Trans, ClaimKind::Wcon, ClaimKind::CommL, ClaimKind::CommR,
                         ClaimKind::CommC, ClaimKind::DiaSemantics}) {
      ClaimReport cr = claim_test(ck, 10000, 0xC1A13, jobs);
      if (cr.violations != 0) return false;
    }
    return true;
  });

  run(7, "truncation oracle agrees with the region evaluator on all six witnesses at N=30", [&] {
    for (const std::string& name : builtin_witness_names()) {
      SymbolicModel sm = builtin_witness(name);
      auto [fname, _] = builtin_target(name);
      CrosscheckReport rep = crosscheck(sm, tick_expand(corpus(fname)), 30);
      if (!rep.disagreements.empty()) return false;
    }
    return true;
  });

  run(8, "products commute structurally (10^4 random pairs) and validate the commutator axioms", [&] {
    Rng rng(0x8a8a);
    for (int i = 0; i < 10000; ++i) {
      int n0 = 1 + static_cast<int>(rng.below(5));
      int n1 = 1 + static_cast<int>(rng.below(5));
      Frame1 f0(n0, {}), f1(n1, {});
      f0.r.assign(static_cast<std::size_t>(n0), 0);
      f1.r.assign(static_cast<std::size_t>(n1), 0);
      for (int x = 0; x < n0; ++x)
        for (int y = 0; y < n0; ++y)
          if (rng.coin()) f0.r[static_cast<std::size_t>(x)] |= WorldSet{1} << y;
      for (int x = 0; x < n1; ++x)
        for (int y = 0; y < n1; ++y)
          if (rng.coin()) f1.r[static_cast<std::size_t>(x)] |= WorldSet{1} << y;
      Frame2 prod = product_frame(f0, f1);
      for (FrameCondition c : {FrameCondition::lcom, FrameCondition::rcom, FrameCondition::conf})
        if (!check_condition(prod, c)) return false;
      if (i < 100 && n0 <= 3 && n1 <= 3) {
        for (const char* ax : {"commut0", "commut1", "commut2"})
          if (!frame_validates(prod, corpus(ax)).valid) return false;
      }
    }
    // guarantee the axiom check also ran on 100 products of sizes <= 3
    for (int i = 0; i < 100; ++i) {
      int n0 = 1 + static_cast<int>(rng.below(3));
      int n1 = 1 + static_cast<int>(rng.below(3));
      Frame1 f0(n0, std::vector<WorldSet>(static_cast<std::size_t>(n0), 0));
      Frame1 f1(n1, std::vector<WorldSet>(static_cast<std::size_t>(n1), 0));
      for (int x = 0; x < n0; ++x)
        for (int y = 0; y < n0; ++y)
          if (rng.coin()) f0.r[static_cast<std::size_t>(x)] |= WorldSet{1} << y;
      for (int x = 0; x < n1; ++x)
        for (int y = 0; y < n1; ++y)
          if (rng.coin()) f1.r[static_cast<std::size_t>(x)] |= WorldSet{1} << y;
      Frame2 prod = product_frame(f0, f1);
      for (const char* ax : {"commut0", "commut1", "commut2"})
        if (!frame_validates(prod, corpus(ax)).valid) return false;
    }
    return true;
  });

  run(9, "fasc/fdesc unsatisfiable on all products with components <= 3", [&] {
    FrameClassSpec asc;
    asc.product_only = true;
    asc.first_component = {FrameCondition::transitive_0};
    CampaignOptions opt;
    opt.max_size = 3;
    opt.jobs = jobs;
    if (!campaign_clean(corpus("fasc"), "fasc", asc, opt)) return false;
    FrameClassSpec desc;
    desc.product_only = true;
    desc.first_component = {FrameCondition::transitive_0, FrameCondition::weakly_connected_0};
    return campaign_clean(corpus("fdesc"), "fdesc", desc, opt);
  });

  run(10, "no p-morphism from any product with components <= 3 onto the two-point frame", [&] {
    Frame2 target = f_sharp();
    bool found = false;
    each_frame1(3, [&](const Frame1& f0) {
      if (found) return;
      each_frame1(3, [&](const Frame1& f1) {
        if (found) return;
        if (p_morphism_search(product_frame(f0, f1), target)) found = true;
      });
    });
    return !found;
  });

  run(11, "10^4 random formula trees survive render-then-parse identically", [&] {
    Rng rng(0x5eed11);
    for (int i = 0; i < 10000; ++i) {
      Formula f = rand_formula(rng, 1 + static_cast<int>(rng.below(5)));
      if (parse_extended(render(f)) != f) return false;
    }
    return true;
  });

  return res;
}

} // namespace modalwb
