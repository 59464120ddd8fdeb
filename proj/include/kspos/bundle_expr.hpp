#pragma once

// Symbolic bundle expressions over user-declared atoms, and the text grammar
//
//   expr   := factor ('*' factor)*
//   factor := 'K' | NAME ['{' attr (',' attr)* '}'] | '(' expr ')'
//           | ('dual' | 'det') '(' expr ')'
//           | ('sym' | 'wedge' | 'schur' | 'pow' | 'dettwist' | 'quot' | 'flagdet') '<' ints '>' '(' expr ')'
//
// A K factor turns the rest of its product into K_X (x) (product). Atom
// attributes: n=, r=, line, griffiths_k=, ks=k:s, nakano, k_positive=, k_ample=,
// ample, semipositive, pullback_from=. An atom is declared once; later bare
// occurrences of the name refer to it.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kspos/weights.hpp"

namespace kspos {

struct DeclaredFacts {
  std::vector<std::pair<int, int>> ks;  // (k, s); griffiths_k=k adds (k, 1)
  bool nakano = false;
  std::optional<int> k_positive;  // line bundles only
  std::optional<int> k_ample;
  bool semipositive = false;  // line bundles only
  bool ample = false;         // line bundles only
  std::optional<int> pullback_from;  // dimension of the target the facts were declared on

  friend bool operator==(const DeclaredFacts&, const DeclaredFacts&) = default;
};

struct AtomDecl {
  std::string name;
  int rank = 1;
  bool line = false;
  DeclaredFacts facts;

  friend bool operator==(const AtomDecl&, const AtomDecl&) = default;
};

class BundleExpr {
 public:
  enum class Kind {
    atom,
    dual,
    tensor,
    det,
    sym_pow,
    wedge_pow,
    schur,
    tensor_pow,
    det_twist,
    canonical_twist,
    quotient,
    flag_quotient_det,
  };

  static BundleExpr atom(AtomDecl decl);
  static BundleExpr line_atom(std::string name, DeclaredFacts facts);
  static BundleExpr dual(BundleExpr e);
  static BundleExpr tensor(std::vector<BundleExpr> factors);  // flattens nested products
  static BundleExpr det(BundleExpr e);
  static BundleExpr sym_pow(BundleExpr e, int p);
  static BundleExpr wedge_pow(BundleExpr e, int q);
  static BundleExpr schur(BundleExpr e, Weight a);
  static BundleExpr tensor_pow(BundleExpr e, int l);
  static BundleExpr det_twist(BundleExpr e, int m);  // e (x) (det e)^m
  static BundleExpr canonical_twist(BundleExpr e);   // K_X (x) e
  static BundleExpr quotient(BundleExpr e, int rank);
  static BundleExpr flag_quotient_det(BundleExpr e, FlagType s);

  Kind kind() const noexcept { return node_->kind; }
  long long rank() const noexcept { return node_->rank; }
  const AtomDecl& atom_decl() const;  // kind() == atom
  const std::vector<BundleExpr>& args() const noexcept { return node_->args; }
  const BundleExpr& arg() const { return node_->args.at(0); }
  int param() const noexcept { return node_->param; }
  const std::vector<int>& ints() const noexcept { return node_->ints; }

  /// Canonical text; tensor factors sorted so commuted products print equal.
  const std::string& str() const noexcept { return node_->text; }

  friend bool operator==(const BundleExpr& a, const BundleExpr& b) { return a.str() == b.str(); }

 private:
  struct Node {
    Kind kind = Kind::atom;
    long long rank = 1;
    std::shared_ptr<const AtomDecl> atom;
    std::vector<BundleExpr> args;
    int param = 0;
    std::vector<int> ints;  // schur weight or flag cuts
    std::string text;
  };
  explicit BundleExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static BundleExpr make(Node n);

  std::shared_ptr<const Node> node_;
};

struct ParsedExpr {
  BundleExpr expr;
  std::optional<int> n;  // base dimension if any atom declared n=
};

/// Throws Error(malformed_expression) with the offending position.
ParsedExpr parse_bundle_expr(std::string_view text);

/// If e is a power of det(E) (det(E), pow<h>(det(E)), schur<h,...,h>(E),
/// wedge<r>(E)), returns (E, h).
std::optional<std::pair<BundleExpr, int>> match_det_power(const BundleExpr& e);

/// If e is an irreducible Schur power of an atom-level bundle (schur, sym, wedge,
/// det, or the bundle itself), returns (E, highest weight).
std::optional<std::pair<BundleExpr, Weight>> match_schur_power(const BundleExpr& e);

/// "E{r=2,griffiths_k=1}" style text for a declared atom.
std::string describe_atom(const AtomDecl& a);

/// Factors of a product (a single non-product expression is its own factor).
std::vector<BundleExpr> tensor_factors(const BundleExpr& e);

}  // namespace kspos
