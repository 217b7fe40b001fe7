#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace modalwb {

// Connectives of the bimodal language. BDia0/BBox0 are the defined
// operators of the tick trick; they are marker nodes only and must be
// eliminated by tick_expand() before any evaluation.
enum class Conn {
  Var,
  Top,
  Bot,
  Not,
  And,
  Or,
  Imp,
  Box,   // [i]
  Dia,   // <i>
  BDia0, // filled diamond, index 0
  BBox0, // filled box, index 0
};

class Formula {
public:
  Formula() = default;

  static Formula var(std::string name);
  static Formula top();
  static Formula bot();
  static Formula neg(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula imp(Formula a, Formula b);
  static Formula box(int index, Formula f);
  static Formula dia(int index, Formula f);
  static Formula bdia0(Formula f);
  static Formula bbox0(Formula f);

  Conn kind() const { return node_->kind; }
  int index() const { return node_->index; }
  const std::string& name() const { return node_->name; }
  std::size_t arity() const { return node_->children.size(); }
  Formula child(std::size_t i = 0) const { return Formula(node_->children.at(i)); }

  bool valid() const { return node_ != nullptr; }

  // Structural equality.
  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

private:
  struct Node {
    Conn kind;
    int index = 0; // modality index for Box/Dia
    std::string name; // variable name for Var
    std::vector<std::shared_ptr<const Node>> children;
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Conn k, int index, std::string name,
                      std::vector<std::shared_ptr<const Node>> ch);

  std::shared_ptr<const Node> node_;
};

struct ParseError : std::runtime_error {
  ParseError(std::size_t pos, const std::string& what)
      : std::runtime_error("parse error at " + std::to_string(pos) + ": " + what),
        position(pos) {}
  std::size_t position;
};

// Text grammar (whitespace insignificant, ASCII):
//   form  := imp
//   imp   := or ("->" imp)?
//   or    := and ("|" and)*
//   and   := unary ("&" unary)*
//   unary := "~" unary | "[0]" unary | "[1]" unary | "<0>" unary | "<1>" unary | atom
//   atom  := "true" | "false" | ident | "(" form ")"
// Identifiers match [a-z][a-z0-9_]*.
Formula parse(const std::string& text);

// Inverse of parse on canonical forms: parse(render(f)) == f.
// Marker nodes render as "<.0>" / "[.0]" and parse back only via
// parse_extended().
std::string render(const Formula& f);

// parse() plus the marker tokens "<.0>" and "[.0]".
Formula parse_extended(const std::string& text);

// Maximal nesting of index-0 / index-1 modalities. Marker nodes count
// toward index 0 with their defined expansion depth not applied (they
// count as one index-0 layer); callers that care should expand first.
std::pair<int, int> modal_depth(const Formula& f);

// Exactly-n pattern: <0>^n f & [0]^{n+1} ~f.
Formula diamond_exactly(unsigned n, Formula f);

// f & [i]f.
Formula box_plus(int index, Formula f);

// chi_0 = [1]~q, chi_n = <1>(q & <0>(p & chi_{n-1})) over fixed p, q.
Formula chi_formula(unsigned n);

// Eliminates every BDia0/BBox0 marker, innermost first:
//   bdia0(s) -> (t -> <0>(~t & (s | <0>s))) & (~t -> <0>(t & (s | <0>s)))
//   bbox0(s) -> ~bdia0(~s)
// The result is marker-free.
Formula tick_expand(const Formula& f);

bool marker_free(const Formula& f);

// Named formulas: commut0, commut1, commut2, fasc, fdesc, phi_inf,
// phi_inf_bullet, psi_inf, tick_guard. Throws std::invalid_argument on
// unknown names.
Formula corpus(const std::string& name);

std::set<std::string> variables(const Formula& f);

} // namespace modalwb
