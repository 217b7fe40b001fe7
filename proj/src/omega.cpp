#include "modalwb/omega.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <map>
#include <stdexcept>

namespace modalwb {

namespace {

constexpr std::int64_t kScanCap = 6000;

} // namespace

// ---------------------------------------------------------------------------
// Families and points

const char* first_fam_name(FirstFam f) {
  switch (f) {
  case FirstFam::Omega1Desc: return "omega1_desc";
  case FirstFam::Omega1DescRefl: return "omega1_desc_refl";
  case FirstFam::OmegaAsc: return "omega_asc";
  case FirstFam::OmegaAscRefl: return "omega_asc_refl";
  }
  return "?";
}

const char* second_fam_name(SecondFam f) {
  switch (f) {
  case SecondFam::OneStep: return "onestep";
  case SecondFam::Universal: return "universal";
  case SecondFam::Difference: return "difference";
  }
  return "?";
}

std::optional<FirstFam> first_fam_from_name(const std::string& s) {
  for (FirstFam f : {FirstFam::Omega1Desc, FirstFam::Omega1DescRefl,
                     FirstFam::OmegaAsc, FirstFam::OmegaAscRefl})
    if (s == first_fam_name(f)) return f;
  return std::nullopt;
}

std::optional<SecondFam> second_fam_from_name(const std::string& s) {
  for (SecondFam f : {SecondFam::OneStep, SecondFam::Universal, SecondFam::Difference})
    if (s == second_fam_name(f)) return f;
  return std::nullopt;
}

bool point_in_universe(const Point& p, const OmegaFamily& fam) {
  if (p.m_omega) {
    if (!fam.first_has_omega()) return false;
  } else if (p.m < 0) {
    return false;
  }
  if (p.k_root) return fam.second == SecondFam::OneStep;
  return p.k >= 0;
}

bool points_related(const Point& a, int index, const Point& b, const OmegaFamily& fam) {
  if (!point_in_universe(a, fam) || !point_in_universe(b, fam)) return false;
  if (index == 0) {
    if (a.k_root != b.k_root || (!a.k_root && a.k != b.k)) return false;
    if (fam.first_reflexive() && a.m_omega == b.m_omega && a.m == b.m) return true;
    if (fam.first_descending()) {
      if (b.m_omega) return false;
      return a.m_omega || a.m > b.m;
    }
    // ascending families have no omega
    return a.m < b.m;
  }
  if (a.m_omega != b.m_omega || (!a.m_omega && a.m != b.m)) return false;
  switch (fam.second) {
  case SecondFam::OneStep: return a.k_root && !b.k_root;
  case SecondFam::Universal: return true;
  case SecondFam::Difference: return a.k != b.k;
  }
  return false;
}

std::string point_str(const Point& p) {
  std::string m = p.m_omega ? "omega" : std::to_string(p.m);
  std::string k = p.k_root ? "root" : std::to_string(p.k);
  return "(" + m + ", " + k + ")";
}

// ---------------------------------------------------------------------------
// Atoms and membership

bool atom_holds(const Atom& a, const Point& p) {
  switch (a.kind) {
  case AtomKind::MEqOmega: return p.m_omega;
  case AtomKind::MGeC: return p.m_omega || p.m >= a.c;
  case AtomKind::MEqC: return !p.m_omega && p.m == a.c;
  case AtomKind::MEven: return !p.m_omega && p.m % 2 == 0;
  case AtomKind::KRoot: return p.k_root;
  case AtomKind::KEqC: return !p.k_root && p.k == a.c;
  case AtomKind::KGeC: return !p.k_root && p.k >= a.c;
  case AtomKind::KEven: return !p.k_root && p.k % 2 == 0;
  case AtomKind::MEqKPlus: return !p.m_omega && !p.k_root && p.m == p.k + a.c;
  case AtomKind::MGtKPlus: return !p.k_root && (p.m_omega || p.m > p.k + a.c);
  }
  return false;
}

bool lit_holds(const Lit& l, const Point& p) { return atom_holds(l.atom, p) == l.pos; }

bool cell_member(const Cell& c, const Point& p) {
  for (const Lit& l : c.lits)
    if (!lit_holds(l, p)) return false;
  return true;
}

bool region_member(const Region& r, const Point& p, const OmegaFamily& fam) {
  if (!point_in_universe(p, fam)) return false;
  for (const Cell& c : r.cells)
    if (cell_member(c, p)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Normalization

namespace {

// Literals with no satisfying / no falsifying points at all.
std::optional<bool> lit_constant(const Lit& l) {
  const Atom& a = l.atom;
  bool always = false, never = false;
  switch (a.kind) {
  case AtomKind::MGeC: always = a.c <= 0; break; // holds at omega too
  case AtomKind::MEqC: never = a.c < 0; break;
  case AtomKind::KEqC: never = a.c < 0; break;
  case AtomKind::KGeC: break; // false at root even for c <= 0
  default: break;
  }
  if (always) return l.pos;
  if (never) return !l.pos;
  return std::nullopt;
}

std::int64_t cell_scan_bound(const Cell& c) {
  std::int64_t s = 8;
  for (const Lit& l : c.lits) s += 2 + 2 * std::llabs(l.atom.c);
  return std::min(s, kScanCap);
}

// Scan points of the universe in the canonical minimal order: m ascending
// with omega last; within each m the root (if present) before columns 0,1,...
template <typename Fn>
void scan_universe(const OmegaFamily& fam, std::int64_t bound, Fn&& fn) {
  auto row = [&](Point base) {
    if (fam.second == SecondFam::OneStep) {
      base.k_root = true;
      base.k = 0;
      if (fn(base)) return true;
    }
    base.k_root = false;
    for (std::int64_t k = 0; k <= bound; ++k) {
      base.k = k;
      if (fn(base)) return true;
    }
    return false;
  };
  for (std::int64_t m = 0; m <= bound; ++m)
    if (row(Point{m, false, 0, false})) return;
  if (fam.first_has_omega()) row(Point{0, true, 0, false});
}

std::optional<Point> cell_witness(const Cell& c, const OmegaFamily& fam) {
  std::optional<Point> found;
  scan_universe(fam, cell_scan_bound(c), [&](const Point& p) {
    if (cell_member(c, p)) {
      found = p;
      return true;
    }
    return false;
  });
  return found;
}

// One propagation pass of cheap syntactic simplifications; returns false if
// the cell is contradictory. The bounded scan remains the authority on
// emptiness; this only keeps cells small.
bool propagate_cell(std::vector<Lit>& lits) {
  auto has = [&](AtomKind k, bool pos, std::int64_t c) {
    return std::find(lits.begin(), lits.end(), Lit{{k, c}, pos}) != lits.end();
  };
  auto find_pos_c = [&](AtomKind k) -> std::optional<std::int64_t> {
    for (const Lit& l : lits)
      if (l.pos && l.atom.kind == k) return l.atom.c;
    return std::nullopt;
  };
  bool m_omega = has(AtomKind::MEqOmega, true, 0);
  bool k_root = has(AtomKind::KRoot, true, 0);
  std::optional<std::int64_t> m_eq = find_pos_c(AtomKind::MEqC);
  std::optional<std::int64_t> k_eq = find_pos_c(AtomKind::KEqC);

  std::vector<Lit> out;
  for (const Lit& l : lits) {
    const Atom& a = l.atom;
    std::optional<bool> val; // decided truth value, if any
    std::optional<Lit> repl; // replacement literal, if any
    if (auto cst = lit_constant(l)) {
      if (!*cst) return false;
      continue;
    }
    if (m_omega) {
      switch (a.kind) {
      case AtomKind::MGeC: val = true; break;
      case AtomKind::MEqC:
      case AtomKind::MEven:
      case AtomKind::MEqKPlus: val = false; break;
      case AtomKind::MGtKPlus:
        // at omega this says exactly "k is a column"
        repl = Lit{{AtomKind::KGeC, 0}, l.pos};
        break;
      default: break;
      }
    } else if (m_eq) {
      switch (a.kind) {
      case AtomKind::MEqOmega: val = false; break;
      case AtomKind::MGeC: val = *m_eq >= a.c; break;
      case AtomKind::MEven: val = *m_eq % 2 == 0; break;
      case AtomKind::MEqC:
        if (a.c != *m_eq) val = false;
        break;
      default: break;
      }
    }
    if (!val && !repl && k_root) {
      switch (a.kind) {
      case AtomKind::KEqC:
      case AtomKind::KGeC:
      case AtomKind::KEven:
      case AtomKind::MEqKPlus:
      case AtomKind::MGtKPlus: val = false; break;
      default: break;
      }
    } else if (!val && !repl && k_eq) {
      switch (a.kind) {
      case AtomKind::KRoot: val = false; break;
      case AtomKind::KGeC: val = *k_eq >= a.c; break;
      case AtomKind::KEven: val = *k_eq % 2 == 0; break;
      case AtomKind::KEqC:
        if (a.c != *k_eq) val = false;
        break;
      case AtomKind::MEqKPlus: repl = Lit{{AtomKind::MEqC, *k_eq + a.c}, l.pos}; break;
      case AtomKind::MGtKPlus: repl = Lit{{AtomKind::MGeC, *k_eq + a.c + 1}, l.pos}; break;
      default: break;
      }
    }
    if (val) {
      if (*val != l.pos) return false;
      // keep the defining equalities themselves
      bool defining = (a.kind == AtomKind::MEqC && m_eq && a.c == *m_eq && l.pos) ||
                      (a.kind == AtomKind::KEqC && k_eq && a.c == *k_eq && l.pos);
      if (defining) out.push_back(l);
      continue;
    }
    if (repl) {
      if (auto cst = lit_constant(*repl)) {
        if (!*cst) return false;
        continue;
      }
      out.push_back(*repl);
      continue;
    }
    out.push_back(l);
  }
  lits = std::move(out);
  return true;
}

bool normalize_lits(std::vector<Lit>& lits) {
  for (int pass = 0; pass < 8; ++pass) {
    std::vector<Lit> before = lits;
    if (!propagate_cell(lits)) return false;
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    // complementary pair
    for (std::size_t i = 0; i + 1 < lits.size(); ++i)
      if (lits[i].atom == lits[i + 1].atom && lits[i].pos != lits[i + 1].pos)
        return false;
    // merge one-sided bounds: keep the strongest of each family
    std::vector<Lit> merged;
    for (const Lit& l : lits) {
      AtomKind k = l.atom.kind;
      bool boundish = k == AtomKind::MGeC || k == AtomKind::KGeC || k == AtomKind::MGtKPlus;
      if (boundish && !merged.empty() && merged.back().atom.kind == k &&
          merged.back().pos == l.pos) {
        // sorted ascending by c: pos keeps max, neg keeps min
        if (l.pos)
          merged.back() = l;
        continue;
      }
      merged.push_back(l);
    }
    lits = std::move(merged);
    if (lits == before) return true;
  }
  return true;
}

} // namespace

Cell normalize_cell(Cell c, bool& is_empty, const OmegaFamily& fam) {
  if (!normalize_lits(c.lits)) {
    is_empty = true;
    return c;
  }
  is_empty = !cell_witness(c, fam).has_value();
  return c;
}

Region normalize(Region r, const OmegaFamily& fam) {
  std::vector<Cell> cells;
  cells.reserve(r.cells.size());
  for (Cell& c : r.cells) {
    bool empty = false;
    Cell n = normalize_cell(std::move(c), empty, fam);
    if (!empty) cells.push_back(std::move(n));
  }
  std::sort(cells.begin(), cells.end());
  cells.erase(std::unique(cells.begin(), cells.end()), cells.end());

  // pairwise merging until fixpoint: subset subsumption, weaker-bound
  // absorption, and resolution on a single complementary literal
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < cells.size() && !changed; ++i) {
      for (std::size_t j = 0; j < cells.size() && !changed; ++j) {
        if (i == j) continue;
        const Cell& a = cells[i];
        const Cell& b = cells[j];
        if (std::includes(a.lits.begin(), a.lits.end(), b.lits.begin(), b.lits.end())) {
          // b is a subset of a's literals, so b covers a
          if (a.lits.size() == b.lits.size()) continue; // identical, deduped above
          cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(i));
          changed = true;
          continue;
        }
        if (a.lits.size() != b.lits.size()) continue;
        // literals unique to each side
        std::vector<Lit> ua, ub;
        std::set_difference(a.lits.begin(), a.lits.end(), b.lits.begin(), b.lits.end(),
                            std::back_inserter(ua));
        std::set_difference(b.lits.begin(), b.lits.end(), a.lits.begin(), a.lits.end(),
                            std::back_inserter(ub));
        if (ua.size() != 1 || ub.size() != 1) continue;
        const Lit& la = ua[0];
        const Lit& lb = ub[0];
        if (la.atom == lb.atom && la.pos != lb.pos) {
          // resolution: (X & l) | (X & ~l) = X
          Cell merged = a;
          std::erase(merged.lits, la);
          cells[i] = std::move(merged);
          cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(j));
          changed = true;
          continue;
        }
        AtomKind k = la.atom.kind;
        bool boundish = k == AtomKind::MGeC || k == AtomKind::KGeC || k == AtomKind::MGtKPlus;
        if (boundish && lb.atom.kind == k && la.pos == lb.pos) {
          // same bound family: the weaker cell absorbs the stronger one
          bool a_weaker = la.pos ? la.atom.c < lb.atom.c : la.atom.c > lb.atom.c;
          cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(a_weaker ? j : i));
          changed = true;
        }
      }
    }
  }
  std::sort(cells.begin(), cells.end());
  return Region{std::move(cells)};
}

Region region_union(Region a, const Region& b, const OmegaFamily& fam) {
  a.cells.insert(a.cells.end(), b.cells.begin(), b.cells.end());
  return normalize(std::move(a), fam);
}

Region region_intersect(const Region& a, const Region& b, const OmegaFamily& fam) {
  Region out;
  out.cells.reserve(a.cells.size() * b.cells.size());
  for (const Cell& ca : a.cells)
    for (const Cell& cb : b.cells) {
      Cell c = ca;
      c.lits.insert(c.lits.end(), cb.lits.begin(), cb.lits.end());
      out.cells.push_back(std::move(c));
    }
  return normalize(std::move(out), fam);
}

Region region_complement(const Region& a, const OmegaFamily& fam) {
  Region acc = Region::full();
  for (const Cell& c : a.cells) {
    if (c.lits.empty()) return Region::empty();
    Region neg;
    for (const Lit& l : c.lits) neg.cells.push_back(Cell{{Lit{l.atom, !l.pos}}});
    acc = region_intersect(acc, neg, fam);
    if (acc.cells.empty()) return acc;
  }
  return acc;
}

std::optional<Point> region_witness(const Region& r, const OmegaFamily& fam) {
  std::int64_t bound = 0;
  for (const Cell& c : r.cells) bound = std::max(bound, cell_scan_bound(c));
  std::optional<Point> found;
  scan_universe(fam, bound, [&](const Point& p) {
    for (const Cell& c : r.cells)
      if (cell_member(c, p)) {
        found = p;
        return true;
      }
    return false;
  });
  return found;
}

bool region_empty(const Region& r, const OmegaFamily& fam) {
  return !region_witness(r, fam).has_value();
}

std::vector<Point> region_witnesses(const Region& r, const OmegaFamily& fam, int n) {
  std::vector<Point> out;
  if (n <= 0) return out;
  std::int64_t bound = 0;
  for (const Cell& c : r.cells) bound = std::max(bound, cell_scan_bound(c));
  // extend the scan so that n distinct witnesses fit even in thin regions
  bound += 2 * n;
  scan_universe(fam, std::min(bound, kScanCap), [&](const Point& p) {
    for (const Cell& c : r.cells)
      if (cell_member(c, p)) {
        out.push_back(p);
        break;
      }
    return static_cast<int>(out.size()) >= n;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Preimage: quantifier elimination over the cell vocabulary

namespace {

// Linear expressions in the eliminated variable's comparisons: a constant,
// m + off, or k + off, where m/k refer to the coordinates of the *result*
// point.
enum class Base : std::uint8_t { C, M, K };
struct Expr {
  Base b;
  std::int64_t off;
};

struct Cond {
  std::vector<Lit> lits;
};

bool cond_push(Cond& c, Lit l) {
  if (auto cst = lit_constant(l)) return *cst;
  c.lits.push_back(l);
  return true;
}

// x >= y as a condition on the result point; false means unsatisfiable.
bool add_ge(Cond& c, Expr x, Expr y) {
  if (x.b == y.b) return x.off >= y.off;
  auto lit = [&](AtomKind k, std::int64_t cst, bool pos) {
    return cond_push(c, Lit{{k, cst}, pos});
  };
  if (x.b == Base::C && y.b == Base::M) return lit(AtomKind::MGeC, x.off - y.off + 1, false);
  if (x.b == Base::C && y.b == Base::K) return lit(AtomKind::KGeC, x.off - y.off + 1, false);
  if (x.b == Base::M && y.b == Base::C) return lit(AtomKind::MGeC, y.off - x.off, true);
  if (x.b == Base::M && y.b == Base::K) return lit(AtomKind::MGtKPlus, y.off - x.off - 1, true);
  if (x.b == Base::K && y.b == Base::C) return lit(AtomKind::KGeC, y.off - x.off, true);
  if (x.b == Base::K && y.b == Base::M) return lit(AtomKind::MGtKPlus, x.off - y.off, false);
  return false;
}

bool add_eq_impl(Cond& c, Expr x, Expr y, bool pos) {
  if (x.b > y.b) std::swap(x, y);
  if (x.b == y.b) return (x.off == y.off) == pos;
  auto lit = [&](AtomKind k, std::int64_t cst) { return cond_push(c, Lit{{k, cst}, pos}); };
  if (x.b == Base::C && y.b == Base::M) return lit(AtomKind::MEqC, x.off - y.off);
  if (x.b == Base::C && y.b == Base::K) return lit(AtomKind::KEqC, x.off - y.off);
  return lit(AtomKind::MEqKPlus, y.off - x.off); // M vs K: m + a = k + b
}

bool add_neq(Cond& c, Expr x, Expr y) { return add_eq_impl(c, x, y, false); }

bool add_even(Cond& c, Expr x, bool want_even) {
  bool off_even = ((x.off % 2) + 2) % 2 == 0;
  if (x.b == Base::C) return off_even == want_even;
  AtomKind k = x.b == Base::M ? AtomKind::MEven : AtomKind::KEven;
  return cond_push(c, Lit{{k, 0}, want_even == off_even});
}

// Constraints on the eliminated variable gathered from one cell.
struct VarConstraints {
  std::vector<Expr> lowers{{Base::C, 0}}; // the variable is a natural
  std::vector<Expr> uppers;
  std::vector<Expr> diseqs;
  std::optional<bool> parity;
  bool has_explicit_upper = false;

  void lower(Expr e) { lowers.push_back(e); }
  void upper(Expr e) {
    uppers.push_back(e);
    has_explicit_upper = true;
  }
  void eq(Expr e) {
    lowers.push_back(e);
    uppers.push_back(e);
    has_explicit_upper = true;
  }

  std::int64_t jmax() const {
    return 2 + 2 * static_cast<std::int64_t>(diseqs.size()) + (parity ? 1 : 0);
  }

  // All feasibility conditions for the candidate value w.
  bool check(Expr w, Cond& c) const {
    for (const Expr& l : lowers)
      if (!add_ge(c, w, l)) return false;
    for (const Expr& u : uppers)
      if (!add_ge(c, u, w)) return false;
    for (const Expr& d : diseqs)
      if (!add_neq(c, w, d)) return false;
    if (parity && !add_even(c, w, *parity)) return false;
    return true;
  }
};

void emit(Region& out, const std::vector<Lit>& base, const Cond& c,
          std::initializer_list<Lit> extra = {}) {
  Cell cell;
  cell.lits = base;
  cell.lits.insert(cell.lits.end(), c.lits.begin(), c.lits.end());
  cell.lits.insert(cell.lits.end(), extra.begin(), extra.end());
  out.cells.push_back(std::move(cell));
}

// One root-decided branch of a cell for index-0 preimage: the shared second
// coordinate is either definitely the root or definitely a column.
struct Pre0Branch {
  std::vector<Lit> klits; // pass-through second-coordinate literals
  bool at_root = false;
  VarConstraints vc; // constraints on the eliminated predecessor value m'
  bool dead = false; // some literal is unsatisfiable in this branch
  bool omega_only = false;
};

Pre0Branch make_pre0_branch(const Cell& cell, bool at_root) {
  Pre0Branch br;
  br.at_root = at_root;
  for (const Lit& l : cell.lits) {
    const Atom& a = l.atom;
    switch (a.kind) {
    case AtomKind::KRoot:
      if (a.c == 0 && l.pos != at_root) br.dead = true;
      br.klits.push_back(l);
      break;
    case AtomKind::KEqC:
    case AtomKind::KGeC:
    case AtomKind::KEven:
      if (at_root) {
        if (l.pos) br.dead = true; // all false at the root
      } else {
        br.klits.push_back(l);
      }
      break;
    case AtomKind::MEqOmega:
      if (l.pos) br.omega_only = true;
      break;
    case AtomKind::MGeC:
      if (l.pos)
        br.vc.lower({Base::C, a.c});
      else
        br.vc.upper({Base::C, a.c - 1});
      break;
    case AtomKind::MEqC:
      if (l.pos)
        br.vc.eq({Base::C, a.c});
      else
        br.vc.diseqs.push_back({Base::C, a.c});
      break;
    case AtomKind::MEven:
      if (br.vc.parity && *br.vc.parity != l.pos) br.dead = true;
      br.vc.parity = l.pos;
      break;
    case AtomKind::MEqKPlus:
      if (at_root) {
        if (l.pos) br.dead = true; // false at the root
      } else if (l.pos) {
        br.vc.eq({Base::K, a.c});
      } else {
        br.vc.diseqs.push_back({Base::K, a.c});
      }
      break;
    case AtomKind::MGtKPlus:
      if (at_root) {
        if (l.pos) br.dead = true;
      } else if (l.pos) {
        br.vc.lower({Base::K, a.c + 1});
      } else {
        br.vc.upper({Base::K, a.c});
      }
      break;
    }
  }
  return br;
}

// Strict index-0 preimage of one cell. Descending: result m ranges over
// everything above some feasible predecessor, so candidates enumerate the
// least feasible value from the lower bounds. Ascending: dually from the
// upper bounds, with an unbounded-above fast path.
void pre0_strict_cell(Region& out, const Cell& cell, const OmegaFamily& fam) {
  std::vector<Pre0Branch> branches;
  bool has_root_lit = false;
  for (const Lit& l : cell.lits)
    if (l.atom.kind == AtomKind::KRoot) has_root_lit = l.pos || has_root_lit;
  if (fam.second == SecondFam::OneStep) {
    bool has_any_root_lit =
        std::any_of(cell.lits.begin(), cell.lits.end(),
                    [](const Lit& l) { return l.atom.kind == AtomKind::KRoot; });
    if (has_any_root_lit) {
      branches.push_back(make_pre0_branch(cell, has_root_lit));
    } else {
      Cell root_cell = cell;
      root_cell.lits.push_back(Lit{{AtomKind::KRoot, 0}, true});
      Cell col_cell = cell;
      col_cell.lits.push_back(Lit{{AtomKind::KRoot, 0}, false});
      branches.push_back(make_pre0_branch(root_cell, true));
      branches.push_back(make_pre0_branch(col_cell, false));
    }
  } else {
    branches.push_back(make_pre0_branch(cell, false));
  }

  bool desc = fam.first_descending();
  for (Pre0Branch& br : branches) {
    if (br.dead) continue;
    if (br.omega_only) continue; // no strict predecessor of omega-points
    VarConstraints& vc = br.vc;
    if (desc) {
      for (Expr base : vc.lowers)
        for (std::int64_t j = 0; j <= vc.jmax(); ++j) {
          Expr w{base.b, base.off + j};
          Cond c;
          if (!vc.check(w, c)) continue;
          Lit above = w.b == Base::C ? Lit{{AtomKind::MGeC, w.off + 1}, true}
                                     : Lit{{AtomKind::MGtKPlus, w.off}, true};
          emit(out, br.klits, c, {above});
        }
    } else {
      if (!vc.has_explicit_upper) {
        // feasible predecessors are unbounded above, so every point qualifies
        Cond c;
        emit(out, br.klits, c);
        continue;
      }
      for (Expr base : vc.uppers)
        for (std::int64_t j = 0; j <= vc.jmax(); ++j) {
          Expr w{base.b, base.off - j};
          Cond c;
          if (!vc.check(w, c)) continue;
          // result m < w
          if (w.b == Base::C) {
            if (w.off <= 0) continue;
            emit(out, br.klits, c, {Lit{{AtomKind::MGeC, w.off}, false}});
          } else {
            emit(out, br.klits, c, {Lit{{AtomKind::MGtKPlus, w.off - 1}, false}});
          }
        }
    }
  }
}

// Index-1 preimage of one cell: eliminate the successor column k'. The
// result keeps the cell's pure-m literals; diagonal literals are resolved
// after splitting on m = omega.
void pre1_cell(Region& out, const Cell& cell, const OmegaFamily& fam) {
  for (const Lit& l : cell.lits)
    if (l.atom.kind == AtomKind::KRoot && l.pos) return; // the root is never an r1-successor

  bool has_diag = std::any_of(cell.lits.begin(), cell.lits.end(), [](const Lit& l) {
    return l.atom.kind == AtomKind::MEqKPlus || l.atom.kind == AtomKind::MGtKPlus;
  });
  std::optional<bool> omega_decided;
  for (const Lit& l : cell.lits)
    if (l.atom.kind == AtomKind::MEqOmega) omega_decided = l.pos;

  std::vector<std::pair<Cell, bool>> splits; // (cell, m_is_omega)
  if (!has_diag) {
    splits.emplace_back(cell, false); // diagonal-free: the flag is unused
  } else if (omega_decided) {
    splits.emplace_back(cell, *omega_decided);
  } else if (fam.first_has_omega()) {
    Cell fin = cell, om = cell;
    fin.lits.push_back(Lit{{AtomKind::MEqOmega, 0}, false});
    om.lits.push_back(Lit{{AtomKind::MEqOmega, 0}, true});
    splits.emplace_back(std::move(fin), false);
    splits.emplace_back(std::move(om), true);
  } else {
    splits.emplace_back(cell, false);
  }

  for (auto& [sc, at_omega] : splits) {
    std::vector<Lit> mlits;
    VarConstraints vc;
    bool dead = false;
    for (const Lit& l : sc.lits) {
      const Atom& a = l.atom;
      switch (a.kind) {
      case AtomKind::MEqOmega:
      case AtomKind::MGeC:
      case AtomKind::MEqC:
      case AtomKind::MEven:
        mlits.push_back(l);
        break;
      case AtomKind::KRoot:
        break; // negative only; true of every column
      case AtomKind::KEqC:
        if (l.pos)
          vc.eq({Base::C, a.c});
        else
          vc.diseqs.push_back({Base::C, a.c});
        break;
      case AtomKind::KGeC:
        if (l.pos)
          vc.lower({Base::C, a.c});
        else
          vc.upper({Base::C, a.c - 1});
        break;
      case AtomKind::KEven:
        if (vc.parity && *vc.parity != l.pos) dead = true;
        vc.parity = l.pos;
        break;
      case AtomKind::MEqKPlus:
        if (at_omega) {
          if (l.pos) dead = true;
        } else if (l.pos) {
          vc.eq({Base::M, -a.c});
        } else {
          vc.diseqs.push_back({Base::M, -a.c});
        }
        break;
      case AtomKind::MGtKPlus:
        if (at_omega) {
          if (!l.pos) dead = true; // omega-row diagonal holds at every column
        } else if (l.pos) {
          vc.upper({Base::M, -a.c - 1});
        } else {
          vc.lower({Base::M, -a.c});
        }
        break;
      }
    }
    if (dead) continue;

    struct RelBranch {
      std::vector<Lit> klits;
      std::optional<Expr> extra_lower, extra_upper;
    };
    std::vector<RelBranch> rels;
    switch (fam.second) {
    case SecondFam::OneStep:
      rels.push_back({{Lit{{AtomKind::KRoot, 0}, true}}, {}, {}});
      break;
    case SecondFam::Universal:
      rels.push_back({{}, {}, {}});
      break;
    case SecondFam::Difference:
      rels.push_back({{}, {}, Expr{Base::K, -1}}); // k' < k
      rels.push_back({{}, Expr{Base::K, +1}, {}}); // k' > k
      break;
    }

    for (const RelBranch& rel : rels) {
      VarConstraints v = vc;
      if (rel.extra_lower) v.lower(*rel.extra_lower);
      if (rel.extra_upper) v.upper(*rel.extra_upper);
      std::vector<Lit> base = mlits;
      base.insert(base.end(), rel.klits.begin(), rel.klits.end());
      if (!v.has_explicit_upper) {
        // columns unbounded above: a witness always exists
        Cond c;
        emit(out, base, c);
        continue;
      }
      // a feasible value exists iff the least one does, so lower-bound
      // candidates suffice
      for (Expr e : v.lowers)
        for (std::int64_t j = 0; j <= v.jmax(); ++j) {
          Expr w{e.b, e.off + j};
          Cond c;
          if (!v.check(w, c)) continue;
          emit(out, base, c);
        }
    }
  }
}

} // namespace

Region preimage(const Region& t, int index, const OmegaFamily& fam) {
  Region in = normalize(t, fam);
  Region out;
  for (const Cell& c : in.cells) {
    if (index == 0)
      pre0_strict_cell(out, c, fam);
    else
      pre1_cell(out, c, fam);
  }
  if (index == 0 && fam.first_reflexive())
    out.cells.insert(out.cells.end(), in.cells.begin(), in.cells.end());
  return normalize(std::move(out), fam);
}

Region point_region(const Point& p) {
  Cell c;
  c.lits.push_back(p.m_omega ? Lit{{AtomKind::MEqOmega, 0}, true}
                             : Lit{{AtomKind::MEqC, p.m}, true});
  c.lits.push_back(p.k_root ? Lit{{AtomKind::KRoot, 0}, true}
                            : Lit{{AtomKind::KEqC, p.k}, true});
  return Region::single(std::move(c));
}

Region successor_region(const Point& p, int index, const OmegaFamily& fam) {
  if (index == 0) {
    Lit kfix = p.k_root ? Lit{{AtomKind::KRoot, 0}, true} : Lit{{AtomKind::KEqC, p.k}, true};
    Region r;
    if (fam.first_descending()) {
      Cell below;
      below.lits.push_back(p.m_omega ? Lit{{AtomKind::MEqOmega, 0}, false}
                                     : Lit{{AtomKind::MGeC, p.m}, false});
      below.lits.push_back(kfix);
      r.cells.push_back(std::move(below));
    } else if (!p.m_omega) {
      Cell above;
      above.lits.push_back(Lit{{AtomKind::MGeC, p.m + 1}, true});
      above.lits.push_back(Lit{{AtomKind::MEqOmega, 0}, false});
      above.lits.push_back(kfix);
      r.cells.push_back(std::move(above));
    }
    if (fam.first_reflexive()) {
      const Region self = point_region(p);
      r.cells.insert(r.cells.end(), self.cells.begin(), self.cells.end());
    }
    return normalize(std::move(r), fam);
  }
  Lit mfix = p.m_omega ? Lit{{AtomKind::MEqOmega, 0}, true} : Lit{{AtomKind::MEqC, p.m}, true};
  Region r;
  switch (fam.second) {
  case SecondFam::OneStep:
    if (p.k_root) r.cells.push_back(Cell{{mfix, Lit{{AtomKind::KRoot, 0}, false}}});
    break;
  case SecondFam::Universal:
    r.cells.push_back(Cell{{mfix}});
    break;
  case SecondFam::Difference:
    r.cells.push_back(Cell{{mfix, Lit{{AtomKind::KEqC, p.k}, false}}});
    break;
  }
  return normalize(std::move(r), fam);
}

// ---------------------------------------------------------------------------
// Symbolic evaluation and certificates

namespace {

struct SymEval {
  const SymbolicModel& sm;
  std::vector<CertEntry> entries;

  int eval(const Formula& f) {
    int idx = static_cast<int>(entries.size());
    entries.push_back(CertEntry{render(f), Region::empty(), -1, -1, {}, {}, {}, {}});
    const OmegaFamily& fam = sm.family;
    switch (f.kind()) {
    case Conn::Var: {
      auto it = sm.valuation.find(f.name());
      entries[static_cast<std::size_t>(idx)].region =
          it == sm.valuation.end() ? Region::empty() : normalize(it->second, fam);
      break;
    }
    case Conn::Top:
      entries[static_cast<std::size_t>(idx)].region = Region::full();
      break;
    case Conn::Bot:
      break;
    case Conn::Not: {
      int c = eval(f.child());
      entries[static_cast<std::size_t>(idx)].region =
          region_complement(entries[static_cast<std::size_t>(c)].region, fam);
      break;
    }
    case Conn::And: {
      int a = eval(f.child(0));
      int b = eval(f.child(1));
      entries[static_cast<std::size_t>(idx)].region =
          region_intersect(entries[static_cast<std::size_t>(a)].region,
                           entries[static_cast<std::size_t>(b)].region, fam);
      break;
    }
    case Conn::Or: {
      int a = eval(f.child(0));
      int b = eval(f.child(1));
      entries[static_cast<std::size_t>(idx)].region =
          region_union(entries[static_cast<std::size_t>(a)].region,
                       entries[static_cast<std::size_t>(b)].region, fam);
      break;
    }
    case Conn::Imp: {
      int a = eval(f.child(0));
      int b = eval(f.child(1));
      entries[static_cast<std::size_t>(idx)].region = region_union(
          region_complement(entries[static_cast<std::size_t>(a)].region, fam),
          entries[static_cast<std::size_t>(b)].region, fam);
      break;
    }
    case Conn::Dia: {
      int c = eval(f.child());
      CertEntry& e = entries[static_cast<std::size_t>(idx)];
      e.modal_index = f.index();
      e.child_entry = c;
      const Region& sub = entries[static_cast<std::size_t>(c)].region;
      e.region = preimage(sub, f.index(), fam);
      if (auto pt = region_witness(e.region, fam)) {
        e.dia_point = pt;
        e.dia_witness =
            region_witness(region_intersect(successor_region(*pt, f.index(), fam), sub, fam), fam);
      }
      break;
    }
    case Conn::Box: {
      int c = eval(f.child());
      CertEntry& e = entries[static_cast<std::size_t>(idx)];
      e.modal_index = f.index();
      e.child_entry = c;
      const Region& sub = entries[static_cast<std::size_t>(c)].region;
      Region nsub = region_complement(sub, fam);
      Region fail = preimage(nsub, f.index(), fam);
      e.region = region_complement(fail, fam);
      if (auto pt = region_witness(fail, fam)) {
        e.box_point = pt;
        e.box_refuter =
            region_witness(region_intersect(successor_region(*pt, f.index(), fam), nsub, fam), fam);
      }
      break;
    }
    case Conn::BDia0:
    case Conn::BBox0:
      throw std::invalid_argument("eval_symbolic: formula contains unexpanded markers");
    }
    return idx;
  }
};

} // namespace

std::pair<Region, Certificate> eval_symbolic(const SymbolicModel& sm, const Formula& f) {
  SymEval ev{sm, {}};
  ev.eval(f);
  Region top = ev.entries.front().region;
  return {std::move(top), Certificate{std::move(ev.entries)}};
}

bool certificate_valid(const Certificate& cert, const SymbolicModel& sm) {
  const OmegaFamily& fam = sm.family;
  for (const CertEntry& e : cert.entries) {
    if (e.modal_index < 0) continue;
    if (e.child_entry < 0 || e.child_entry >= static_cast<int>(cert.entries.size()))
      return false;
    const CertEntry& child = cert.entries[static_cast<std::size_t>(e.child_entry)];
    if (e.dia_point) {
      if (!e.dia_witness) return false;
      if (!region_member(e.region, *e.dia_point, fam)) return false;
      if (!points_related(*e.dia_point, e.modal_index, *e.dia_witness, fam)) return false;
      if (!region_member(child.region, *e.dia_witness, fam)) return false;
    }
    if (e.box_point) {
      if (!e.box_refuter) return false;
      if (region_member(e.region, *e.box_point, fam)) return false;
      if (!points_related(*e.box_point, e.modal_index, *e.box_refuter, fam)) return false;
      if (region_member(child.region, *e.box_refuter, fam)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Built-in witness models

namespace {

Region diag_region(std::int64_t d, bool finite_only) {
  Cell c;
  c.lits.push_back(Lit{{AtomKind::MEqKPlus, d}, true});
  if (finite_only) c.lits.push_back(Lit{{AtomKind::MEqOmega, 0}, false});
  return Region::single(std::move(c));
}

} // namespace

std::vector<std::string> builtin_witness_names() {
  return {"lemma_satone", "lemma_satoner", "lemma_satoner_refl",
          "lemma_sattwo", "fasc_witness", "fdesc_witness"};
}

SymbolicModel builtin_witness(const std::string& name) {
  SymbolicModel sm;
  if (name == "lemma_satone") {
    sm.family = {FirstFam::Omega1Desc, SecondFam::OneStep};
    sm.valuation["p"] = diag_region(0, true);
  } else if (name == "lemma_satoner" || name == "lemma_satoner_refl") {
    sm.family = {name == "lemma_satoner" ? FirstFam::Omega1Desc : FirstFam::Omega1DescRefl,
                 SecondFam::OneStep};
    Cell t;
    t.lits.push_back(Lit{{AtomKind::MEven, 0}, true});
    t.lits.push_back(Lit{{AtomKind::MGeC, 2}, true});
    sm.valuation["t"] = Region::single(std::move(t));
    sm.valuation["p"] = diag_region(1, true);
  } else if (name == "lemma_sattwo") {
    sm.family = {FirstFam::Omega1Desc, SecondFam::Difference};
    sm.valuation["p"] = diag_region(0, true);
    sm.valuation["q"] = diag_region(1, false);
  } else if (name == "fasc_witness") {
    sm.family = {FirstFam::OmegaAsc, SecondFam::OneStep};
    sm.valuation["p"] = diag_region(0, false);
  } else if (name == "fdesc_witness") {
    sm.family = {FirstFam::Omega1Desc, SecondFam::OneStep};
    sm.valuation["p"] = diag_region(0, true);
  } else {
    throw std::invalid_argument("unknown builtin witness: " + name);
  }
  return sm;
}

std::pair<std::string, Point> builtin_target(const std::string& name) {
  if (name == "lemma_satone") return {"phi_inf", Point::omega_root()};
  if (name == "lemma_satoner") return {"phi_inf_bullet", Point::omega_root()};
  if (name == "lemma_satoner_refl") return {"phi_inf_bullet", Point::omega_root()};
  if (name == "lemma_sattwo") return {"psi_inf", Point::omega(0)};
  if (name == "fasc_witness") return {"fasc", Point::at_root(0)};
  if (name == "fdesc_witness") return {"fdesc", Point::omega_root()};
  throw std::invalid_argument("unknown builtin witness: " + name);
}

// ---------------------------------------------------------------------------
// Three-valued truncation oracle

namespace {

struct Window {
  const OmegaFamily fam;
  const int n;
  std::vector<Point> points;
  std::map<std::pair<std::int64_t, std::int64_t>, int> index; // encoded (m,k) -> idx

  static std::pair<std::int64_t, std::int64_t> enc(const Point& p) {
    return {p.m_omega ? -1 : p.m, p.k_root ? -1 : p.k};
  }

  explicit Window(const OmegaFamily& f, int nn) : fam(f), n(nn) {
    auto add_row = [&](Point base) {
      if (fam.second == SecondFam::OneStep) {
        Point r = base;
        r.k_root = true;
        r.k = 0;
        points.push_back(r);
      }
      for (std::int64_t k = 0; k <= n; ++k) {
        Point c = base;
        c.k_root = false;
        c.k = k;
        points.push_back(c);
      }
    };
    for (std::int64_t m = 0; m <= n; ++m) add_row(Point{m, false, 0, false});
    if (fam.first_has_omega()) add_row(Point{0, true, 0, false});
    for (std::size_t i = 0; i < points.size(); ++i)
      index[enc(points[i])] = static_cast<int>(i);
  }

  // In-window successor indices of points[i] plus whether the full successor
  // set lies in the window.
  std::pair<std::vector<int>, bool> successors(int i, int modal_index) const {
    const Point& p = points[static_cast<std::size_t>(i)];
    std::vector<int> out;
    bool complete = true;
    auto push = [&](const Point& q) {
      auto it = index.find(enc(q));
      if (it != index.end())
        out.push_back(it->second);
      else
        complete = false;
    };
    if (modal_index == 0) {
      if (fam.first_descending()) {
        if (p.m_omega) {
          for (std::int64_t m = 0; m <= n; ++m) push(Point{m, false, p.k, p.k_root});
          complete = false; // finite predecessors above the window exist
        } else {
          for (std::int64_t m = 0; m < p.m; ++m) push(Point{m, false, p.k, p.k_root});
        }
      } else {
        for (std::int64_t m = p.m + 1; m <= n; ++m) push(Point{m, false, p.k, p.k_root});
        complete = false; // ascending successor sets are infinite
      }
      if (fam.first_reflexive()) push(p);
    } else {
      switch (fam.second) {
      case SecondFam::OneStep:
        if (p.k_root) {
          for (std::int64_t k = 0; k <= n; ++k) push(Point{p.m, p.m_omega, k, false});
          complete = false; // columns beyond the window
        }
        break;
      case SecondFam::Universal:
        for (std::int64_t k = 0; k <= n; ++k) push(Point{p.m, p.m_omega, k, false});
        complete = false;
        break;
      case SecondFam::Difference:
        for (std::int64_t k = 0; k <= n; ++k)
          if (k != p.k) push(Point{p.m, p.m_omega, k, false});
        complete = false;
        break;
      }
    }
    return {std::move(out), complete};
  }
};

TV tv_not(TV a) {
  if (a == TV::Unknown) return TV::Unknown;
  return a == TV::True ? TV::False : TV::True;
}

struct TruncEval {
  const SymbolicModel& sm;
  const Window& w;
  TruncationResult& res;

  int eval(const Formula& f) {
    int idx = static_cast<int>(res.subformulas.size());
    res.subformulas.push_back(render(f));
    res.verdicts.emplace_back(w.points.size(), TV::Unknown);
    auto row = [&]() -> std::vector<TV>& { return res.verdicts[static_cast<std::size_t>(idx)]; };
    std::size_t np = w.points.size();
    switch (f.kind()) {
    case Conn::Var: {
      auto it = sm.valuation.find(f.name());
      for (std::size_t i = 0; i < np; ++i) {
        bool v = it != sm.valuation.end() &&
                 region_member(it->second, w.points[i], sm.family);
        res.verdicts[static_cast<std::size_t>(idx)][i] = v ? TV::True : TV::False;
      }
      break;
    }
    case Conn::Top:
      std::fill(row().begin(), row().end(), TV::True);
      break;
    case Conn::Bot:
      std::fill(row().begin(), row().end(), TV::False);
      break;
    case Conn::Not: {
      int c = eval(f.child());
      for (std::size_t i = 0; i < np; ++i)
        res.verdicts[static_cast<std::size_t>(idx)][i] =
            tv_not(res.verdicts[static_cast<std::size_t>(c)][i]);
      break;
    }
    case Conn::And:
    case Conn::Or:
    case Conn::Imp: {
      int a = eval(f.child(0));
      int b = eval(f.child(1));
      for (std::size_t i = 0; i < np; ++i) {
        TV x = res.verdicts[static_cast<std::size_t>(a)][i];
        TV y = res.verdicts[static_cast<std::size_t>(b)][i];
        TV r;
        if (f.kind() == Conn::And)
          r = (x == TV::False || y == TV::False) ? TV::False
              : (x == TV::True && y == TV::True) ? TV::True
                                                 : TV::Unknown;
        else if (f.kind() == Conn::Or)
          r = (x == TV::True || y == TV::True) ? TV::True
              : (x == TV::False && y == TV::False) ? TV::False
                                                   : TV::Unknown;
        else
          r = (x == TV::False || y == TV::True) ? TV::True
              : (x == TV::True && y == TV::False) ? TV::False
                                                  : TV::Unknown;
        res.verdicts[static_cast<std::size_t>(idx)][i] = r;
      }
      break;
    }
    case Conn::Dia:
    case Conn::Box: {
      int c = eval(f.child());
      bool dia = f.kind() == Conn::Dia;
      for (std::size_t i = 0; i < np; ++i) {
        auto [succ, complete] = w.successors(static_cast<int>(i), f.index());
        bool hit = false, all_opp = true;
        for (int s : succ) {
          TV v = res.verdicts[static_cast<std::size_t>(c)][static_cast<std::size_t>(s)];
          if (v == (dia ? TV::True : TV::False)) hit = true;
          if (v != (dia ? TV::False : TV::True)) all_opp = false;
        }
        TV r = TV::Unknown;
        if (hit)
          r = dia ? TV::True : TV::False;
        else if (complete && all_opp)
          r = dia ? TV::False : TV::True;
        res.verdicts[static_cast<std::size_t>(idx)][i] = r;
      }
      break;
    }
    case Conn::BDia0:
    case Conn::BBox0:
      throw std::invalid_argument("truncation_eval: formula contains unexpanded markers");
    }
    return idx;
  }
};

} // namespace

TruncationResult truncation_eval(const SymbolicModel& sm, const Formula& f, int window) {
  Window w(sm.family, window);
  TruncationResult res;
  res.window = window;
  res.points = w.points;
  TruncEval ev{sm, w, res};
  ev.eval(f);
  return res;
}

CrosscheckReport crosscheck(const SymbolicModel& sm, const Formula& f, int window) {
  CrosscheckReport rep;
  rep.window = window;
  auto [top, cert] = eval_symbolic(sm, f);
  (void)top;
  TruncationResult tr = truncation_eval(sm, f, window);
  // both evaluators assign pre-order node indices
  assert(cert.entries.size() == tr.subformulas.size());
  for (std::size_t node = 0; node < cert.entries.size(); ++node) {
    for (std::size_t i = 0; i < tr.points.size(); ++i) {
      ++rep.points_compared;
      TV v = tr.verdicts[node][i];
      if (v == TV::Unknown) continue;
      ++rep.definite_verdicts;
      bool sym = region_member(cert.entries[node].region, tr.points[i], sm.family);
      if (sym != (v == TV::True))
        rep.disagreements.push_back(Disagreement{tr.subformulas[node], tr.points[i], v, sym});
    }
  }
  return rep;
}

} // namespace modalwb
