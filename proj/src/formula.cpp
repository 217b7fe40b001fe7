#include "modalwb/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace modalwb {

Formula Formula::make(Conn k, int index, std::string name,
                      std::vector<std::shared_ptr<const Node>> ch) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->index = index;
  n->name = std::move(name);
  n->children = std::move(ch);
  return Formula(std::move(n));
}

Formula Formula::var(std::string name) { return make(Conn::Var, 0, std::move(name), {}); }
Formula Formula::top() { return make(Conn::Top, 0, {}, {}); }
Formula Formula::bot() { return make(Conn::Bot, 0, {}, {}); }
Formula Formula::neg(Formula f) { return make(Conn::Not, 0, {}, {f.node_}); }
Formula Formula::conj(Formula a, Formula b) { return make(Conn::And, 0, {}, {a.node_, b.node_}); }
Formula Formula::disj(Formula a, Formula b) { return make(Conn::Or, 0, {}, {a.node_, b.node_}); }
Formula Formula::imp(Formula a, Formula b) { return make(Conn::Imp, 0, {}, {a.node_, b.node_}); }

Formula Formula::box(int index, Formula f) {
  if (index != 0 && index != 1) throw std::invalid_argument("modality index must be 0 or 1");
  return make(Conn::Box, index, {}, {f.node_});
}

Formula Formula::dia(int index, Formula f) {
  if (index != 0 && index != 1) throw std::invalid_argument("modality index must be 0 or 1");
  return make(Conn::Dia, index, {}, {f.node_});
}

Formula Formula::bdia0(Formula f) { return make(Conn::BDia0, 0, {}, {f.node_}); }
Formula Formula::bbox0(Formula f) { return make(Conn::BBox0, 0, {}, {f.node_}); }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.node_->kind != b.node_->kind || a.node_->index != b.node_->index ||
      a.node_->name != b.node_->name ||
      a.node_->children.size() != b.node_->children.size())
    return false;
  for (std::size_t i = 0; i < a.node_->children.size(); ++i)
    if (!(Formula(a.node_->children[i]) == Formula(b.node_->children[i]))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Parser {
  const std::string& s;
  std::size_t pos = 0;
  bool extended;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool eat(const char* tok) {
    skip_ws();
    std::size_t len = std::char_traits<char>::length(tok);
    if (s.compare(pos, len, tok) == 0) {
      pos += len;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) { throw ParseError(pos, what); }

  Formula form() { return imp(); }

  Formula imp() {
    Formula lhs = disj();
    if (eat("->")) return Formula::imp(lhs, imp()); // right-associative
    return lhs;
  }

  Formula disj() {
    Formula f = conj();
    while (true) {
      skip_ws();
      // don't confuse '|' with nothing else in this grammar
      if (pos < s.size() && s[pos] == '|') {
        ++pos;
        f = Formula::disj(f, conj());
      } else {
        return f;
      }
    }
  }

  Formula conj() {
    Formula f = unary();
    while (eat("&")) f = Formula::conj(f, unary());
    return f;
  }

  Formula unary() {
    skip_ws();
    if (eat("~")) return Formula::neg(unary());
    if (eat("[0]")) return Formula::box(0, unary());
    if (eat("[1]")) return Formula::box(1, unary());
    if (eat("<0>")) return Formula::dia(0, unary());
    if (eat("<1>")) return Formula::dia(1, unary());
    if (extended && eat("<.0>")) return Formula::bdia0(unary());
    if (extended && eat("[.0]")) return Formula::bbox0(unary());
    return atom();
  }

  Formula atom() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of input");
    if (eat("(")) {
      Formula f = form();
      if (!eat(")")) fail("expected ')'");
      return f;
    }
    char c = s[pos];
    if (c >= 'a' && c <= 'z') {
      std::size_t start = pos;
      ++pos;
      while (pos < s.size() &&
             ((s[pos] >= 'a' && s[pos] <= 'z') || (s[pos] >= '0' && s[pos] <= '9') ||
              s[pos] == '_'))
        ++pos;
      std::string id = s.substr(start, pos - start);
      if (id == "true") return Formula::top();
      if (id == "false") return Formula::bot();
      return Formula::var(std::move(id));
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  Formula run() {
    Formula f = form();
    skip_ws();
    if (pos != s.size()) fail("trailing input");
    return f;
  }
};

} // namespace

Formula parse(const std::string& text) { return Parser{text, 0, false}.run(); }
Formula parse_extended(const std::string& text) { return Parser{text, 0, true}.run(); }

// ---------------------------------------------------------------------------
// Rendering

namespace {

// Precedence levels: imp=0 (right assoc), or=1, and=2, unary/atom=3.
void render_rec(const Formula& f, int min_prec, std::string& out) {
  auto paren = [&](int prec, auto&& body) {
    bool need = prec < min_prec;
    if (need) out += '(';
    body();
    if (need) out += ')';
  };
  switch (f.kind()) {
    case Conn::Var: out += f.name(); return;
    case Conn::Top: out += "true"; return;
    case Conn::Bot: out += "false"; return;
    case Conn::Not:
      out += '~';
      render_rec(f.child(), 3, out);
      return;
    case Conn::Box:
      out += f.index() == 0 ? "[0]" : "[1]";
      render_rec(f.child(), 3, out);
      return;
    case Conn::Dia:
      out += f.index() == 0 ? "<0>" : "<1>";
      render_rec(f.child(), 3, out);
      return;
    case Conn::BDia0:
      out += "<.0>";
      render_rec(f.child(), 3, out);
      return;
    case Conn::BBox0:
      out += "[.0]";
      render_rec(f.child(), 3, out);
      return;
    case Conn::And:
      paren(2, [&] {
        render_rec(f.child(0), 2, out);
        out += " & ";
        render_rec(f.child(1), 3, out);
      });
      return;
    case Conn::Or:
      paren(1, [&] {
        render_rec(f.child(0), 1, out);
        out += " | ";
        render_rec(f.child(1), 2, out);
      });
      return;
    case Conn::Imp:
      paren(0, [&] {
        render_rec(f.child(0), 1, out);
        out += " -> ";
        render_rec(f.child(1), 0, out); // right-associative
      });
      return;
  }
}

} // namespace

std::string render(const Formula& f) {
  std::string out;
  render_rec(f, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Derived operators and the corpus

std::pair<int, int> modal_depth(const Formula& f) {
  auto [d0, d1] = [&]() -> std::pair<int, int> {
    std::pair<int, int> d{0, 0};
    for (std::size_t i = 0; i < f.arity(); ++i) {
      auto c = modal_depth(f.child(i));
      d.first = std::max(d.first, c.first);
      d.second = std::max(d.second, c.second);
    }
    return d;
  }();
  switch (f.kind()) {
    case Conn::Box:
    case Conn::Dia:
      if (f.index() == 0) ++d0; else ++d1;
      break;
    case Conn::BDia0:
    case Conn::BBox0:
      ++d0;
      break;
    default: break;
  }
  return {d0, d1};
}

Formula diamond_exactly(unsigned n, Formula f) {
  Formula dias = f;
  for (unsigned i = 0; i < n; ++i) dias = Formula::dia(0, dias);
  Formula boxes = Formula::neg(f);
  for (unsigned i = 0; i < n + 1; ++i) boxes = Formula::box(0, boxes);
  return Formula::conj(dias, boxes);
}

Formula box_plus(int index, Formula f) { return Formula::conj(f, Formula::box(index, f)); }

Formula chi_formula(unsigned n) {
  Formula p = Formula::var("p"), q = Formula::var("q");
  Formula chi = Formula::box(1, Formula::neg(q));
  for (unsigned i = 0; i < n; ++i)
    chi = Formula::dia(1, Formula::conj(q, Formula::dia(0, Formula::conj(p, chi))));
  return chi;
}

namespace {

Formula bdia0_expansion(const Formula& s) {
  Formula t = Formula::var("t");
  auto step = [&](Formula guard, Formula flipped) {
    return Formula::imp(
        guard, Formula::dia(0, Formula::conj(flipped,
                                             Formula::disj(s, Formula::dia(0, s)))));
  };
  return Formula::conj(step(t, Formula::neg(t)), step(Formula::neg(t), t));
}

} // namespace

Formula tick_expand(const Formula& f) {
  std::vector<Formula> ch;
  ch.reserve(f.arity());
  for (std::size_t i = 0; i < f.arity(); ++i) ch.push_back(tick_expand(f.child(i)));
  switch (f.kind()) {
    case Conn::Var:
    case Conn::Top:
    case Conn::Bot: return f;
    case Conn::Not: return Formula::neg(ch[0]);
    case Conn::And: return Formula::conj(ch[0], ch[1]);
    case Conn::Or: return Formula::disj(ch[0], ch[1]);
    case Conn::Imp: return Formula::imp(ch[0], ch[1]);
    case Conn::Box: return Formula::box(f.index(), ch[0]);
    case Conn::Dia: return Formula::dia(f.index(), ch[0]);
    case Conn::BDia0: return bdia0_expansion(ch[0]);
    case Conn::BBox0: return Formula::neg(bdia0_expansion(Formula::neg(ch[0])));
  }
  throw std::logic_error("unreachable");
}

bool marker_free(const Formula& f) {
  if (f.kind() == Conn::BDia0 || f.kind() == Conn::BBox0) return false;
  for (std::size_t i = 0; i < f.arity(); ++i)
    if (!marker_free(f.child(i))) return false;
  return true;
}

namespace {

// phi_inf with every [0]/<0> turned into its tick-trick marker form.
Formula bulletify(const Formula& f) {
  std::vector<Formula> ch;
  for (std::size_t i = 0; i < f.arity(); ++i) ch.push_back(bulletify(f.child(i)));
  switch (f.kind()) {
    case Conn::Var:
    case Conn::Top:
    case Conn::Bot: return f;
    case Conn::Not: return Formula::neg(ch[0]);
    case Conn::And: return Formula::conj(ch[0], ch[1]);
    case Conn::Or: return Formula::disj(ch[0], ch[1]);
    case Conn::Imp: return Formula::imp(ch[0], ch[1]);
    case Conn::Box:
      return f.index() == 0 ? Formula::bbox0(ch[0]) : Formula::box(1, ch[0]);
    case Conn::Dia:
      return f.index() == 0 ? Formula::bdia0(ch[0]) : Formula::dia(1, ch[0]);
    case Conn::BDia0:
    case Conn::BBox0: throw std::logic_error("marker in bulletify input");
  }
  throw std::logic_error("unreachable");
}

} // namespace

Formula corpus(const std::string& name) {
  using F = Formula;
  F p = F::var("p"), q = F::var("q"), t = F::var("t");
  auto And = [](std::vector<F> fs) {
    F acc = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) acc = F::conj(acc, fs[i]);
    return acc;
  };

  if (name == "commut0") return F::imp(F::box(1, F::box(0, p)), F::box(0, F::box(1, p)));
  if (name == "commut1") return F::imp(F::box(0, F::box(1, p)), F::box(1, F::box(0, p)));
  if (name == "commut2") return F::imp(F::dia(0, F::box(1, p)), F::box(1, F::dia(0, p)));

  if (name == "fasc")
    return F::conj(box_plus(0, F::dia(1, p)),
                   box_plus(0, F::box(1, F::imp(p, F::dia(0, box_plus(0, F::neg(p)))))));

  if (name == "fdesc")
    return And({F::dia(1, F::dia(0, p)),
                F::box(1, F::imp(F::dia(0, p), F::dia(0, F::dia(0, p)))),
                F::box(1, F::box(0, F::imp(p, F::box(0, F::neg(p))))),
                F::box(0, F::dia(1, p))});

  if (name == "phi_inf") {
    // one-step-exactly pattern <0>s & [0][0]~s
    auto dia_exactly_one = [&](F s) {
      return F::conj(F::dia(0, s), F::box(0, F::box(0, F::neg(s))));
    };
    F init = F::dia(1, F::dia(0, F::conj(p, F::box(0, F::bot()))));
    F hgen = F::box(1, F::imp(F::dia(0, p), F::dia(0, dia_exactly_one(p))));
    F inner = And({p, F::box(0, F::neg(p)), F::box(0, F::box(0, F::neg(p)))});
    F vgen = F::box(0, F::imp(F::dia(1, dia_exactly_one(p)), F::dia(1, inner)));
    return And({init, hgen, vgen});
  }

  if (name == "tick_guard") {
    F g = F::imp(F::disj(t, F::dia(1, t)), F::conj(t, F::box(1, t)));
    return F::conj(g, F::box(0, g));
  }

  if (name == "phi_inf_bullet")
    return F::conj(corpus("tick_guard"), tick_expand(bulletify(corpus("phi_inf"))));

  if (name == "psi_inf") {
    F e2 = And({p, F::neg(q), F::box(0, F::neg(q)), F::box(1, F::neg(q))});
    F init = F::dia(0, e2);
    F hgen = box_plus(1, F::dia(0, F::conj(q, F::box(1, F::neg(q)))));
    F u_body = And({p, F::neg(q), F::box(0, F::neg(q)), F::dia(1, q)});
    F vgen = box_plus(1, F::box(0, F::imp(q, F::dia(1, u_body))));
    F puniq = box_plus(1, F::box(0, F::box(0, F::imp(p, F::box(0, F::neg(p))))));
    return And({init, hgen, vgen, puniq});
  }

  throw std::invalid_argument("unknown corpus formula: " + name);
}

std::set<std::string> variables(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Formula&)> go = [&](const Formula& g) {
    if (g.kind() == Conn::Var) out.insert(g.name());
    for (std::size_t i = 0; i < g.arity(); ++i) go(g.child(i));
  };
  go(f);
  return out;
}

} // namespace modalwb
