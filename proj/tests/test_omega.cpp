#include <doctest.h>

#include <vector>

#include "modalwb/omega.hpp"
#include "modalwb/rng.hpp"

using namespace modalwb;

namespace {

const std::vector<OmegaFamily> kFamilies = [] {
  std::vector<OmegaFamily> out;
  for (FirstFam f : {FirstFam::Omega1Desc, FirstFam::Omega1DescRefl, FirstFam::OmegaAsc,
                     FirstFam::OmegaAscRefl})
    for (SecondFam s : {SecondFam::OneStep, SecondFam::Universal, SecondFam::Difference})
      out.push_back({f, s});
  return out;
}();

Cell cell_of(std::initializer_list<Lit> lits) {
  Cell c;
  c.lits.assign(lits);
  return c;
}

Lit lit(AtomKind k, std::int64_t c = 0, bool pos = true) { return Lit{{k, c}, pos}; }

// sample grid, generous relative to the constants used below
std::vector<Point> sample_points(const OmegaFamily& fam, int bound) {
  std::vector<Point> pts;
  auto push = [&](Point p) {
    if (point_in_universe(p, fam)) pts.push_back(p);
  };
  for (int m = 0; m <= bound; ++m) {
    push(Point::at_root(m));
    for (int k = 0; k <= bound; ++k) push(Point::of(m, k));
  }
  push(Point::omega_root());
  for (int k = 0; k <= bound; ++k) push(Point::omega(k));
  return pts;
}

Region random_region(Rng& rng) {
  Region r;
  int cells = 1 + static_cast<int>(rng.below(3));
  for (int i = 0; i < cells; ++i) {
    Cell c;
    int lits = 1 + static_cast<int>(rng.below(3));
    for (int j = 0; j < lits; ++j) {
      auto kind = static_cast<AtomKind>(rng.below(10));
      std::int64_t cst = 0;
      switch (kind) {
      case AtomKind::MGeC:
      case AtomKind::MEqC:
      case AtomKind::KEqC:
      case AtomKind::KGeC: cst = static_cast<std::int64_t>(rng.below(5)); break;
      case AtomKind::MEqKPlus:
      case AtomKind::MGtKPlus: cst = static_cast<std::int64_t>(rng.below(5)) - 2; break;
      default: break;
      }
      c.lits.push_back(Lit{{kind, cst}, rng.coin()});
    }
    r.cells.push_back(std::move(c));
  }
  return r;
}

bool brute_preimage(const Region& t, int index, const OmegaFamily& fam, const Point& x,
                    int bound) {
  auto hit = [&](const Point& y) {
    return points_related(x, index, y, fam) && region_member(t, y, fam);
  };
  for (int m = 0; m <= bound; ++m) {
    if (hit(Point::at_root(m))) return true;
    for (int k = 0; k <= bound; ++k)
      if (hit(Point::of(m, k))) return true;
  }
  if (hit(Point::omega_root())) return true;
  for (int k = 0; k <= bound; ++k)
    if (hit(Point::omega(k))) return true;
  return false;
}

} // namespace

TEST_CASE("point universe and relations") {
  OmegaFamily desc{FirstFam::Omega1Desc, SecondFam::OneStep};
  CHECK(point_in_universe(Point::omega_root(), desc));
  CHECK(points_related(Point::omega_root(), 0, Point::at_root(5), desc));
  CHECK(!points_related(Point::at_root(5), 0, Point::omega_root(), desc));
  CHECK(points_related(Point::of(4, 2), 0, Point::of(1, 2), desc));
  CHECK(!points_related(Point::of(4, 2), 0, Point::of(1, 3), desc));
  CHECK(!points_related(Point::of(4, 2), 0, Point::of(4, 2), desc));
  CHECK(points_related(Point::at_root(3), 1, Point::of(3, 7), desc));
  CHECK(!points_related(Point::of(3, 7), 1, Point::at_root(3), desc));

  OmegaFamily asc{FirstFam::OmegaAscRefl, SecondFam::Difference};
  CHECK(!point_in_universe(Point::omega(0), asc));
  CHECK(!point_in_universe(Point::at_root(0), asc));
  CHECK(points_related(Point::of(2, 1), 0, Point::of(2, 1), asc));
  CHECK(points_related(Point::of(2, 1), 0, Point::of(5, 1), asc));
  CHECK(!points_related(Point::of(2, 1), 0, Point::of(1, 1), asc));
  CHECK(points_related(Point::of(2, 1), 1, Point::of(2, 4), asc));
  CHECK(!points_related(Point::of(2, 1), 1, Point::of(2, 1), asc));
}

TEST_CASE("atom semantics at limit points") {
  Point om = Point::omega(3), root = Point::at_root(4);
  CHECK(atom_holds({AtomKind::MGeC, 100}, om));
  CHECK(atom_holds({AtomKind::MGtKPlus, 50}, om));
  CHECK(!atom_holds({AtomKind::MEven, 0}, om));
  CHECK(!atom_holds({AtomKind::MEqC, 0}, om));
  CHECK(!atom_holds({AtomKind::MEqKPlus, 0}, om));
  CHECK(!atom_holds({AtomKind::KGeC, 0}, root)); // k-atoms are false at the root
  CHECK(!atom_holds({AtomKind::KEqC, 0}, root));
  CHECK(!atom_holds({AtomKind::KEven, 0}, root));
  CHECK(atom_holds({AtomKind::KRoot, 0}, root));
  CHECK(atom_holds({AtomKind::MEqKPlus, 1}, Point::of(3, 2)));
  CHECK(atom_holds({AtomKind::KGeC, 0}, Point::of(0, 0)));
}

TEST_CASE("region operations are pointwise Boolean") {
  Rng rng(0xB001);
  for (const OmegaFamily& fam : kFamilies) {
    std::vector<Point> pts = sample_points(fam, 9);
    for (int trial = 0; trial < 40; ++trial) {
      Region a = random_region(rng), b = random_region(rng);
      Region u = region_union(a, b, fam);
      Region i = region_intersect(a, b, fam);
      Region c = region_complement(a, fam);
      Region n = normalize(a, fam);
      for (const Point& p : pts) {
        bool in_a = region_member(a, p, fam), in_b = region_member(b, p, fam);
        CHECK(region_member(u, p, fam) == (in_a || in_b));
        CHECK(region_member(i, p, fam) == (in_a && in_b));
        CHECK(region_member(c, p, fam) == !in_a);
        CHECK(region_member(n, p, fam) == in_a);
      }
      CHECK(normalize(n, fam) == n);
    }
  }
}

TEST_CASE("emptiness and minimal witnesses") {
  OmegaFamily desc{FirstFam::Omega1Desc, SecondFam::OneStep};
  OmegaFamily asc{FirstFam::OmegaAsc, SecondFam::OneStep};

  CHECK(region_empty(Region::empty(), desc));
  CHECK(!region_empty(Region::full(), desc));

  Region m3 = Region::single(cell_of({lit(AtomKind::MEqC, 3)}));
  CHECK(region_witness(m3, desc) == Point::at_root(3));

  Region k2 = Region::single(cell_of({lit(AtomKind::KGeC, 2)}));
  CHECK(region_witness(k2, desc) == Point::of(0, 2));

  Region atomega = Region::single(cell_of({lit(AtomKind::MEqOmega)}));
  CHECK(region_witness(atomega, desc) == Point::omega_root());
  CHECK(region_empty(atomega, asc)); // ascending families have no limit point

  CHECK(region_empty(Region::single(cell_of({lit(AtomKind::MEven), lit(AtomKind::MEqOmega)})),
                     desc));
  CHECK(region_empty(Region::single(cell_of({lit(AtomKind::MEqC, 1), lit(AtomKind::MEven)})),
                     desc));
  CHECK(region_empty(
      Region::single(cell_of({lit(AtomKind::MEqKPlus, 0), lit(AtomKind::MGtKPlus, 0)})), desc));

  // omega comes after every finite m; root before columns
  Region even_ge = Region::single(cell_of({lit(AtomKind::MGeC, 3), lit(AtomKind::KEven)}));
  std::vector<Point> w = region_witnesses(even_ge, desc, 3);
  REQUIRE(w.size() == 3);
  CHECK(w[0] == Point::of(3, 0));
  CHECK(w[1] == Point::of(3, 2));
  CHECK(w[2] == Point::of(3, 4));
}

TEST_CASE("preimage hand examples") {
  OmegaFamily desc{FirstFam::Omega1Desc, SecondFam::OneStep};
  // points strictly above the diagonal see the diagonal one step down
  Region diag = Region::single(cell_of({lit(AtomKind::MEqKPlus, 0)}));
  Region pre = preimage(diag, 0, desc);
  Region expect = Region::single(cell_of({lit(AtomKind::MGtKPlus, 0)}));
  CHECK(region_empty(region_intersect(pre, region_complement(expect, desc), desc), desc));
  CHECK(region_empty(region_intersect(expect, region_complement(pre, desc), desc), desc));

  // every point with m >= 1, plus the limit row, has a strict predecessor below it
  Region pre_full = preimage(Region::full(), 0, desc);
  for (int k : {-1, 0, 5}) {
    auto pt = [&](std::int64_t m) { return k < 0 ? Point::at_root(m) : Point::of(m, k); };
    CHECK(!region_member(pre_full, pt(0), desc));
    CHECK(region_member(pre_full, pt(1), desc));
    CHECK(region_member(pre_full, pt(7), desc));
  }
  CHECK(region_member(pre_full, Point::omega_root(), desc));
  CHECK(region_member(pre_full, Point::omega(2), desc));

  // the universal second component erases the k-constraint
  OmegaFamily uni{FirstFam::Omega1Desc, SecondFam::Universal};
  Region k3 = Region::single(cell_of({lit(AtomKind::KEqC, 3)}));
  Region pre1 = preimage(k3, 1, uni);
  for (int m : {0, 1, 6})
    for (int k : {0, 3, 9}) CHECK(region_member(pre1, Point::of(m, k), uni));
  CHECK(region_member(pre1, Point::omega(0), uni));
}

TEST_CASE("preimage agrees with a bounded brute force") {
  Rng rng(0xBF0);
  for (const OmegaFamily& fam : kFamilies) {
    std::vector<Point> pts = sample_points(fam, 8);
    for (int trial = 0; trial < 25; ++trial) {
      Region t = random_region(rng);
      for (int index : {0, 1}) {
        Region pre = preimage(t, index, fam);
        for (const Point& x : pts)
          CHECK(region_member(pre, x, fam) == brute_preimage(t, index, fam, x, 24));
      }
    }
  }
}

TEST_CASE("successor and point regions") {
  for (const OmegaFamily& fam : kFamilies) {
    std::vector<Point> pts = sample_points(fam, 6);
    for (std::size_t i = 0; i < pts.size(); i += 3) {
      const Point& x = pts[i];
      CHECK(region_member(point_region(x), x, fam));
      for (int index : {0, 1}) {
        Region succ = successor_region(x, index, fam);
        for (const Point& y : pts)
          CHECK(region_member(succ, y, fam) == points_related(x, index, y, fam));
      }
    }
  }
}

TEST_CASE("built-in witness valuations at sample points") {
  SymbolicModel two = builtin_witness("lemma_sattwo");
  CHECK(region_member(two.valuation["q"], Point::of(1, 0), two.family));
  CHECK(!region_member(two.valuation["q"], Point::of(1, 1), two.family));
  CHECK(region_member(two.valuation["p"], Point::of(2, 2), two.family));
  CHECK(!region_member(two.valuation["p"], Point::omega(0), two.family));

  SymbolicModel oner = builtin_witness("lemma_satoner");
  CHECK(region_member(oner.valuation["t"], Point::of(2, 5), oner.family));
  CHECK(region_member(oner.valuation["t"], Point::at_root(2), oner.family));
  CHECK(!region_member(oner.valuation["t"], Point::of(3, 5), oner.family));
  CHECK(!region_member(oner.valuation["t"], Point::omega(5), oner.family));
}

TEST_CASE("built-in witnesses satisfy their targets with valid certificates") {
  for (const std::string& name : builtin_witness_names()) {
    CAPTURE(name);
    SymbolicModel sm = builtin_witness(name);
    auto [formula_name, target] = builtin_target(name);
    Formula f = tick_expand(corpus(formula_name));
    auto [region, cert] = eval_symbolic(sm, f);
    CHECK(region_member(region, target, sm.family));
    CHECK(certificate_valid(cert, sm));

    // a corrupted modal witness must be rejected
    Certificate broken = cert;
    bool corrupted = false;
    for (CertEntry& e : broken.entries) {
      if (e.dia_witness) {
        e.dia_witness = Point::of(-1, -1);
        corrupted = true;
        break;
      }
      if (e.box_refuter) {
        e.box_refuter = Point::of(-1, -1);
        corrupted = true;
        break;
      }
    }
    if (corrupted) CHECK(!certificate_valid(broken, sm));
  }
}

TEST_CASE("symbolic evaluation rejects marker nodes") {
  SymbolicModel sm = builtin_witness("lemma_satone");
  CHECK_THROWS_AS(eval_symbolic(sm, Formula::bdia0(Formula::var("p"))), std::invalid_argument);
}

TEST_CASE("truncation verdicts on the diagonal model") {
  SymbolicModel sm = builtin_witness("lemma_satone");
  Formula f = tick_expand(corpus("phi_inf"));
  TruncationResult tr = truncation_eval(sm, f, 8);

  auto point_index = [&](const Point& p) {
    for (std::size_t i = 0; i < tr.points.size(); ++i)
      if (tr.points[i] == p) return static_cast<int>(i);
    return -1;
  };
  std::size_t p_node = tr.subformulas.size();
  for (std::size_t i = 0; i < tr.subformulas.size(); ++i)
    if (tr.subformulas[i] == "p") p_node = i;
  REQUIRE(p_node < tr.subformulas.size());

  int on_diag = point_index(Point::of(3, 3));
  int off_diag = point_index(Point::of(3, 2));
  REQUIRE(on_diag >= 0);
  REQUIRE(off_diag >= 0);
  CHECK(tr.verdicts[p_node][static_cast<std::size_t>(on_diag)] == TV::True);
  CHECK(tr.verdicts[p_node][static_cast<std::size_t>(off_diag)] == TV::False);

  // every definite truncation verdict agrees with direct membership
  for (int idx : {on_diag, off_diag}) {
    TV v = tr.verdicts[p_node][static_cast<std::size_t>(idx)];
    bool direct = region_member(sm.valuation["p"], tr.points[static_cast<std::size_t>(idx)],
                                sm.family);
    CHECK((v == TV::Unknown || (v == TV::True) == direct));
  }
}

TEST_CASE("truncation crosscheck is clean on the built-ins") {
  for (const std::string& name : builtin_witness_names()) {
    CAPTURE(name);
    SymbolicModel sm = builtin_witness(name);
    Formula f = tick_expand(corpus(builtin_target(name).first));
    CrosscheckReport rep = crosscheck(sm, f, 12);
    CHECK(rep.disagreements.empty());
    CHECK(rep.definite_verdicts > 0);
    CHECK(rep.points_compared > 0);
  }
}

TEST_CASE("family names round-trip") {
  for (FirstFam f : {FirstFam::Omega1Desc, FirstFam::Omega1DescRefl, FirstFam::OmegaAsc,
                     FirstFam::OmegaAscRefl})
    CHECK(first_fam_from_name(first_fam_name(f)) == f);
  for (SecondFam s : {SecondFam::OneStep, SecondFam::Universal, SecondFam::Difference})
    CHECK(second_fam_from_name(second_fam_name(s)) == s);
  CHECK(!first_fam_from_name("nope").has_value());
}
