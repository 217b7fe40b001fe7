#include <doctest.h>

#include <set>

#include "modalwb/formula.hpp"
#include "modalwb/rng.hpp"

using namespace modalwb;

namespace {

// independent depth oracle, written directly from the definition
std::pair<int, int> naive_depth(const Formula& f) {
  int d0 = 0, d1 = 0;
  for (std::size_t i = 0; i < f.arity(); ++i) {
    auto [c0, c1] = naive_depth(f.child(i));
    d0 = std::max(d0, c0);
    d1 = std::max(d1, c1);
  }
  if (f.kind() == Conn::Box || f.kind() == Conn::Dia) {
    if (f.index() == 0)
      ++d0;
    else
      ++d1;
  }
  if (f.kind() == Conn::BDia0 || f.kind() == Conn::BBox0) ++d0;
  return {d0, d1};
}

Formula random_ast(Rng& rng, int depth, bool markers) {
  static const char* vars[] = {"p", "q", "t", "x0"};
  if (depth == 0 || rng.below(5) == 0) {
    switch (rng.below(6)) {
    case 0: return Formula::top();
    case 1: return Formula::bot();
    default: return Formula::var(vars[rng.below(4)]);
    }
  }
  switch (rng.below(markers ? 8 : 6)) {
  case 0: return Formula::neg(random_ast(rng, depth - 1, markers));
  case 1: return Formula::conj(random_ast(rng, depth - 1, markers), random_ast(rng, depth - 1, markers));
  case 2: return Formula::disj(random_ast(rng, depth - 1, markers), random_ast(rng, depth - 1, markers));
  case 3: return Formula::imp(random_ast(rng, depth - 1, markers), random_ast(rng, depth - 1, markers));
  case 4: return Formula::box(static_cast<int>(rng.below(2)), random_ast(rng, depth - 1, markers));
  case 5: return Formula::dia(static_cast<int>(rng.below(2)), random_ast(rng, depth - 1, markers));
  case 6: return Formula::bdia0(random_ast(rng, depth - 1, markers));
  default: return Formula::bbox0(random_ast(rng, depth - 1, markers));
  }
}

} // namespace

TEST_CASE("parser basics and precedence") {
  CHECK(render(parse("p -> q -> r")) == render(Formula::imp(Formula::var("p"),
        Formula::imp(Formula::var("q"), Formula::var("r")))));
  CHECK(parse("p & q | r") == Formula::disj(Formula::conj(Formula::var("p"), Formula::var("q")),
                                            Formula::var("r")));
  CHECK(parse("~[0]p") == Formula::neg(Formula::box(0, Formula::var("p"))));
  CHECK(parse("<1> (p & true)") == Formula::dia(1, Formula::conj(Formula::var("p"), Formula::top())));
  CHECK_THROWS_AS(parse("p &"), ParseError);
  CHECK_THROWS_AS(parse("[2]p"), ParseError);
  CHECK_THROWS_AS(parse("(p"), ParseError);
  CHECK_THROWS_AS(parse("<.0>p"), ParseError); // markers need the extended parser
  CHECK(parse_extended("<.0>p") == Formula::bdia0(Formula::var("p")));
  CHECK(parse_extended("[.0]p") == Formula::bbox0(Formula::var("p")));
}

TEST_CASE("render/parse round-trip on random trees") {
  Rng rng(0xF0F0);
  for (int i = 0; i < 10000; ++i) {
    Formula f = random_ast(rng, 1 + static_cast<int>(rng.below(5)), true);
    CAPTURE(render(f));
    REQUIRE(parse_extended(render(f)) == f);
  }
}

TEST_CASE("modal depth") {
  CHECK(modal_depth(parse("p")) == std::pair{0, 0});
  CHECK(modal_depth(parse("[0]<1>p & <0><0>q")) == std::pair{2, 1});
  Rng rng(0xD00D);
  for (int i = 0; i < 2000; ++i) {
    Formula f = random_ast(rng, 1 + static_cast<int>(rng.below(5)), true);
    CHECK(modal_depth(f) == naive_depth(f));
  }
  // chi_n alternates <1> and <0>, one extra [1] at the base
  for (unsigned n = 0; n <= 20; ++n)
    CHECK(modal_depth(chi_formula(n)) == std::pair{static_cast<int>(n), static_cast<int>(n) + 1});
  // each defined-operator layer expands to two index-0 layers
  for (int i = 0; i < 500; ++i) {
    Formula f = random_ast(rng, 1 + static_cast<int>(rng.below(4)), false);
    auto [d0, d1] = modal_depth(f);
    Formula g = Formula::bdia0(f);
    CHECK(modal_depth(tick_expand(g)) == std::pair{d0 + 2, d1});
  }
  CHECK(modal_depth(corpus("phi_inf")) == std::pair{3, 1});
}

TEST_CASE("diamond_exactly and box_plus shapes") {
  Formula p = Formula::var("p");
  CHECK(diamond_exactly(0, p) == Formula::conj(p, Formula::box(0, Formula::neg(p))));
  CHECK(render(diamond_exactly(2, p)) == "<0><0>p & [0][0][0]~p");
  CHECK(box_plus(1, p) == Formula::conj(p, Formula::box(1, p)));
}

TEST_CASE("tick expansion") {
  Formula p = Formula::var("p");
  Formula t = Formula::var("t");
  Formula e = tick_expand(Formula::bdia0(p));
  CHECK(marker_free(e));
  Formula body_pos = Formula::dia(0, Formula::conj(Formula::neg(t), Formula::disj(p, Formula::dia(0, p))));
  Formula body_neg = Formula::dia(0, Formula::conj(t, Formula::disj(p, Formula::dia(0, p))));
  CHECK(e == Formula::conj(Formula::imp(t, body_pos), Formula::imp(Formula::neg(t), body_neg)));
  CHECK(tick_expand(Formula::bbox0(p)) == Formula::neg(tick_expand(Formula::bdia0(Formula::neg(p)))));
  // idempotent on marker-free input
  CHECK(tick_expand(e) == e);
  CHECK(!marker_free(Formula::box(1, Formula::bbox0(p))));
}

TEST_CASE("corpus formulas") {
  for (const char* name : {"commut0", "commut1", "commut2", "fasc", "fdesc", "phi_inf",
                           "phi_inf_bullet", "psi_inf", "tick_guard"}) {
    Formula f = corpus(name);
    CHECK(f.valid());
    CHECK(parse_extended(render(f)) == f);
  }
  CHECK_THROWS_AS(corpus("nope"), std::invalid_argument);
  CHECK(variables(corpus("phi_inf")) == std::set<std::string>{"p"});
  CHECK(variables(corpus("psi_inf")) == std::set<std::string>{"p", "q"});
  CHECK(variables(corpus("fasc")) == std::set<std::string>{"p"});
  CHECK(variables(corpus("phi_inf_bullet")) == std::set<std::string>{"p", "t"});
  CHECK(variables(corpus("tick_guard")) == std::set<std::string>{"t"});
  CHECK(marker_free(corpus("phi_inf")));
  // the bullet variant ships pre-expanded, so expansion is the identity on it
  CHECK(marker_free(corpus("phi_inf_bullet")));
  CHECK(tick_expand(corpus("phi_inf_bullet")) == corpus("phi_inf_bullet"));
  // the commutator axioms
  Formula p = Formula::var("p");
  CHECK(corpus("commut0") ==
        Formula::imp(Formula::box(1, Formula::box(0, p)), Formula::box(0, Formula::box(1, p))));
  CHECK(corpus("commut1") ==
        Formula::imp(Formula::box(0, Formula::box(1, p)), Formula::box(1, Formula::box(0, p))));
  CHECK(corpus("commut2") ==
        Formula::imp(Formula::dia(0, Formula::box(1, p)), Formula::box(1, Formula::dia(0, p))));
}

TEST_CASE("chi formula shape") {
  Formula q = Formula::var("q");
  CHECK(chi_formula(0) == Formula::box(1, Formula::neg(q)));
  Formula p = Formula::var("p");
  CHECK(chi_formula(1) ==
        Formula::dia(1, Formula::conj(q, Formula::dia(0, Formula::conj(p, chi_formula(0))))));
}
