#include "kspos/bundle_expr.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>
#include <map>

#include "kspos/bott.hpp"
#include "kspos/error.hpp"

namespace kspos {

namespace {

constexpr long long kRankCap = 1LL << 40;

[[noreturn]] void malformed(const std::string& what) { throw Error(Errc::malformed_expression, what); }

long long checked_rank(const BigInt& r) {
  if (r > kRankCap) malformed("rank of expression is too large");
  return static_cast<long long>(r);
}

std::string join_ints(const std::vector<int>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
  return out;
}

std::string facts_text(const AtomDecl& a) {
  std::vector<std::string> parts;
  parts.push_back(a.line ? "line" : "r=" + std::to_string(a.rank));
  for (const auto& [k, s] : a.facts.ks)
    parts.push_back(s == 1 ? "griffiths_k=" + std::to_string(k) : "ks=" + std::to_string(k) + ":" + std::to_string(s));
  if (a.facts.nakano) parts.push_back("nakano");
  if (a.facts.k_positive) parts.push_back("k_positive=" + std::to_string(*a.facts.k_positive));
  if (a.facts.k_ample) parts.push_back("k_ample=" + std::to_string(*a.facts.k_ample));
  if (a.facts.ample) parts.push_back("ample");
  if (a.facts.semipositive) parts.push_back("semipositive");
  if (a.facts.pullback_from) parts.push_back("pullback_from=" + std::to_string(*a.facts.pullback_from));
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
  return out;
}

}  // namespace

BundleExpr BundleExpr::make(Node n) { return BundleExpr(std::make_shared<const Node>(std::move(n))); }

const AtomDecl& BundleExpr::atom_decl() const {
  if (kind() != Kind::atom) throw Error(Errc::invalid_input, "not an atom");
  return *node_->atom;
}

BundleExpr BundleExpr::atom(AtomDecl decl) {
  if (decl.name.empty()) malformed("atom needs a name");
  if (decl.rank < 1) malformed("atom " + decl.name + " needs rank >= 1");
  if (decl.line && decl.rank != 1) malformed("line atom " + decl.name + " must have rank 1");
  if (decl.rank == 1) decl.line = true;
  const bool line = decl.line;
  if (!line && (decl.facts.k_positive || decl.facts.semipositive || decl.facts.ample))
    malformed("atom " + decl.name + ": k_positive/semipositive/ample are line-bundle facts");
  for (const auto& [k, s] : decl.facts.ks)
    if (k < 0 || s < 1) malformed("atom " + decl.name + ": ks facts need k >= 0 and s >= 1");
  std::sort(decl.facts.ks.begin(), decl.facts.ks.end());
  decl.facts.ks.erase(std::unique(decl.facts.ks.begin(), decl.facts.ks.end()), decl.facts.ks.end());
  Node n;
  n.kind = Kind::atom;
  n.rank = decl.rank;
  n.text = decl.name;
  n.atom = std::make_shared<const AtomDecl>(std::move(decl));
  return make(std::move(n));
}

BundleExpr BundleExpr::line_atom(std::string name, DeclaredFacts facts) {
  return atom(AtomDecl{std::move(name), 1, true, std::move(facts)});
}

BundleExpr BundleExpr::dual(BundleExpr e) {
  Node n;
  n.kind = Kind::dual;
  n.rank = e.rank();
  n.text = "dual(" + e.str() + ")";
  n.args = {std::move(e)};
  return make(std::move(n));
}

BundleExpr BundleExpr::tensor(std::vector<BundleExpr> factors) {
  std::vector<BundleExpr> flat;
  for (auto& f : factors) {
    if (f.kind() == Kind::tensor)
      flat.insert(flat.end(), f.args().begin(), f.args().end());
    else
      flat.push_back(std::move(f));
  }
  if (flat.empty()) malformed("empty tensor product");
  if (flat.size() == 1) return flat.front();
  std::stable_sort(flat.begin(), flat.end(), [](const BundleExpr& a, const BundleExpr& b) { return a.str() < b.str(); });
  Node n;
  n.kind = Kind::tensor;
  BigInt rank = 1;
  for (const auto& f : flat) {
    rank *= f.rank();
    n.text += (n.text.empty() ? "" : "*") + (f.kind() == Kind::canonical_twist ? "(" + f.str() + ")" : f.str());
  }
  n.rank = checked_rank(rank);
  n.args = std::move(flat);
  return make(std::move(n));
}

BundleExpr BundleExpr::det(BundleExpr e) {
  Node n;
  n.kind = Kind::det;
  n.rank = 1;
  n.text = "det(" + e.str() + ")";
  n.args = {std::move(e)};
  return make(std::move(n));
}

BundleExpr BundleExpr::sym_pow(BundleExpr e, int p) {
  if (p < 1) malformed("sym<p> needs p >= 1");
  Node n;
  n.kind = Kind::sym_pow;
  // C(r + p - 1, p)
  BigInt rank = 1;
  for (int i = 1; i <= p; ++i) rank = rank * (e.rank() + i - 1) / i;
  n.rank = checked_rank(rank);
  n.param = p;
  n.text = "sym<" + std::to_string(p) + ">(" + e.str() + ")";
  n.args = {std::move(e)};
  return make(std::move(n));
}

BundleExpr BundleExpr::wedge_pow(BundleExpr e, int q) {
  if (q < 1 || q > e.rank()) malformed("wedge<q> needs 1 <= q <= rank");
  Node n;
  n.kind = Kind::wedge_pow;
  BigInt rank = 1;
  for (int i = 1; i <= q; ++i) rank = rank * (e.rank() - i + 1) / i;
  n.rank = checked_rank(rank);
  n.param = q;
  n.text = "wedge<" + std::to_string(q) + ">(" + e.str() + ")";
  n.args = {std::move(e)};
  return make(std::move(n));
}

BundleExpr BundleExpr::schur(BundleExpr e, Weight a) {
  if (a.rank() != e.rank()) malformed("schur weight length must equal the rank of its argument");
  if (!a.is_dominant()) malformed("schur weight must be weakly decreasing");
  Node n;
  n.kind = Kind::schur;
  n.rank = checked_rank(schur_dimension(a, a.rank()));
  n.ints = a.entries();
  n.text = "schur<" + join_ints(n.ints) + ">(" + e.str() + ")";
  n.args = {std::move(e)};
  return make(std::move(n));
}

BundleExpr BundleExpr::tensor_pow(BundleExpr e, int l) {
  if (l < 1) malformed("pow<l> needs l >= 1");
  Node n;
  n.kind = Kind::tensor_pow;
  BigInt rank = 1;
  for (int i = 0; i < l; ++i) rank *= e.rank();
  n.rank = checked_rank(rank);
  n.param = l;
  n.text = "pow<" + std::to_string(l) + ">(" + e.str() + ")";
  n.args = {std::move(e)};
  return make(std::move(n));
}

BundleExpr BundleExpr::det_twist(BundleExpr e, int m) {
  Node n;
  n.kind = Kind::det_twist;
  n.rank = e.rank();
  n.param = m;
  n.text = "dettwist<" + std::to_string(m) + ">(" + e.str() + ")";
  n.args = {std::move(e)};
  return make(std::move(n));
}

BundleExpr BundleExpr::canonical_twist(BundleExpr e) {
  if (e.kind() == Kind::canonical_twist) malformed("K appears twice in one product");
  Node n;
  n.kind = Kind::canonical_twist;
  n.rank = e.rank();
  n.text = "K*" + e.str();
  n.args = {std::move(e)};
  return make(std::move(n));
}

BundleExpr BundleExpr::quotient(BundleExpr e, int rank) {
  if (rank < 1 || rank >= e.rank()) malformed("quot<q> needs 1 <= q < rank");
  Node n;
  n.kind = Kind::quotient;
  n.rank = rank;
  n.param = rank;
  n.text = "quot<" + std::to_string(rank) + ">(" + e.str() + ")";
  n.args = {std::move(e)};
  return make(std::move(n));
}

BundleExpr BundleExpr::flag_quotient_det(BundleExpr e, FlagType s) {
  if (s.rank() != e.rank()) malformed("flagdet flag type must end at the rank of its argument");
  if (s.blocks() < 2) malformed("flagdet needs a flag type with at least two blocks");
  Node n;
  n.kind = Kind::flag_quotient_det;
  n.rank = 1;
  n.ints = s.cuts();
  n.text = "flagdet<" + join_ints(n.ints) + ">(" + e.str() + ")";
  n.args = {std::move(e)};
  return make(std::move(n));
}

std::vector<BundleExpr> tensor_factors(const BundleExpr& e) {
  if (e.kind() == BundleExpr::Kind::tensor) return e.args();
  return {e};
}

std::optional<std::pair<BundleExpr, int>> match_det_power(const BundleExpr& e) {
  using K = BundleExpr::Kind;
  switch (e.kind()) {
    case K::det: return std::pair{e.arg(), 1};
    case K::wedge_pow:
      if (e.param() == e.arg().rank()) return std::pair{e.arg(), 1};
      return std::nullopt;
    case K::tensor_pow:
      if (auto inner = match_det_power(e.arg())) return std::pair{inner->first, inner->second * e.param()};
      return std::nullopt;
    case K::schur: {
      const auto& a = e.ints();
      if (std::adjacent_find(a.begin(), a.end(), std::not_equal_to<>{}) == a.end() && a.front() >= 1)
        return std::pair{e.arg(), a.front()};
      return std::nullopt;
    }
    default: return std::nullopt;
  }
}

std::optional<std::pair<BundleExpr, Weight>> match_schur_power(const BundleExpr& e) {
  using K = BundleExpr::Kind;
  auto padded = [](long long rank, int value, int count) {
    std::vector<int> w(static_cast<std::size_t>(rank), 0);
    for (int i = 0; i < count; ++i) w[i] = value;
    return Weight(std::move(w));
  };
  if (e.rank() > 64) return std::nullopt;
  switch (e.kind()) {
    case K::schur: return std::pair{e.arg(), Weight(e.ints())};
    case K::sym_pow: return std::pair{e.arg(), padded(e.arg().rank(), e.param(), 1)};
    case K::wedge_pow: return std::pair{e.arg(), padded(e.arg().rank(), 1, e.param())};
    case K::det: return std::pair{e.arg(), padded(e.arg().rank(), 1, static_cast<int>(e.arg().rank()))};
    case K::tensor_pow:
    case K::dual:
    case K::tensor:
    case K::canonical_twist:
    case K::det_twist: return std::nullopt;
    default: return std::pair{e, padded(e.rank(), 1, 1)};
  }
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ParsedExpr parse() {
    BundleExpr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return {std::move(e), n_};
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    malformed(what + " at position " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  std::string ident() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    if (start == pos_ || std::isdigit(static_cast<unsigned char>(text_[start]))) {
      pos_ = start;
      fail("expected a name");
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  int integer() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    const std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (digits == pos_) {
      pos_ = start;
      fail("expected an integer");
    }
    const long long v = std::stoll(std::string(text_.substr(start, pos_ - start)));
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) fail("integer out of range");
    return static_cast<int>(v);
  }

  std::vector<int> int_list() {
    expect('<');
    std::vector<int> out{integer()};
    while (eat(',')) out.push_back(integer());
    expect('>');
    return out;
  }

  BundleExpr parenthesized() {
    expect('(');
    BundleExpr e = expr();
    expect(')');
    return e;
  }

  BundleExpr expr() {
    std::vector<BundleExpr> factors;
    bool canonical = false;
    do {
      skip_ws();
      if (peek_keyword("K")) {
        if (canonical) fail("K appears twice in one product");
        canonical = true;
        pos_ += 1;
        continue;
      }
      factors.push_back(factor());
    } while (eat('*'));
    if (factors.empty()) fail("K must multiply a bundle");
    BundleExpr prod = BundleExpr::tensor(std::move(factors));
    return canonical ? BundleExpr::canonical_twist(std::move(prod)) : prod;
  }

  bool peek_keyword(std::string_view word) const {
    if (text_.substr(pos_, word.size()) != word) return false;
    const std::size_t after = pos_ + word.size();
    return after >= text_.size() ||
           !(std::isalnum(static_cast<unsigned char>(text_[after])) || text_[after] == '_' || text_[after] == '{');
  }

  BundleExpr factor() {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') return parenthesized();
    const std::size_t start = pos_;
    const std::string name = ident();
    if (name == "dual") return BundleExpr::dual(parenthesized());
    if (name == "det") return BundleExpr::det(parenthesized());
    if (name == "sym" || name == "wedge" || name == "pow" || name == "dettwist" || name == "quot") {
      const std::vector<int> xs = int_list();
      if (xs.size() != 1) fail(name + "<...> takes one integer");
      BundleExpr inner = parenthesized();
      if (name == "sym") return BundleExpr::sym_pow(std::move(inner), xs[0]);
      if (name == "wedge") return BundleExpr::wedge_pow(std::move(inner), xs[0]);
      if (name == "pow") return BundleExpr::tensor_pow(std::move(inner), xs[0]);
      if (name == "quot") return BundleExpr::quotient(std::move(inner), xs[0]);
      return BundleExpr::det_twist(std::move(inner), xs[0]);
    }
    if (name == "schur") {
      std::vector<int> xs = int_list();
      return BundleExpr::schur(parenthesized(), Weight(std::move(xs)));
    }
    if (name == "flagdet") {
      std::vector<int> xs = int_list();
      BundleExpr inner = parenthesized();
      try {
        return BundleExpr::flag_quotient_det(std::move(inner), FlagType(std::move(xs)));
      } catch (const Error& e) {
        if (e.code() == Errc::malformed_expression) throw;
        malformed(std::string("flagdet: ") + e.what());
      }
    }
    if (name == "K") {
      pos_ = start;
      fail("K must be a factor of a product");
    }
    return atom(name);
  }

  BundleExpr atom(const std::string& name) {
    skip_ws();
    const bool has_attrs = pos_ < text_.size() && text_[pos_] == '{';
    auto it = atoms_.find(name);
    if (!has_attrs) {
      if (it == atoms_.end()) fail("atom '" + name + "' used before it is declared");
      return it->second;
    }
    if (it != atoms_.end()) fail("atom '" + name + "' declared twice");
    expect('{');
    AtomDecl decl;
    decl.name = name;
    bool have_rank = false;
    if (!eat('}')) {
      do {
        const std::string key = ident();
        if (key == "line") {
          decl.line = true;
        } else if (key == "nakano") {
          decl.facts.nakano = true;
        } else if (key == "ample") {
          decl.facts.ample = true;
        } else if (key == "semipositive") {
          decl.facts.semipositive = true;
        } else {
          expect('=');
          const int v = integer();
          if (key == "n") {
            if (v < 1) fail("n must be >= 1");
            if (n_ && *n_ != v) fail("atoms disagree on n");
            n_ = v;
          } else if (key == "r") {
            decl.rank = v;
            have_rank = true;
          } else if (key == "griffiths_k") {
            decl.facts.ks.emplace_back(v, 1);
          } else if (key == "ks") {
            expect(':');
            decl.facts.ks.emplace_back(v, integer());
          } else if (key == "k_positive") {
            decl.facts.k_positive = v;
          } else if (key == "k_ample") {
            decl.facts.k_ample = v;
          } else if (key == "pullback_from") {
            decl.facts.pullback_from = v;
          } else {
            fail("unknown atom attribute '" + key + "'");
          }
        }
      } while (eat(','));
      expect('}');
    }
    if (!have_rank && !decl.line) fail("atom '" + name + "' needs r=<rank> or line");
    if (decl.line && have_rank && decl.rank != 1) fail("line atom '" + name + "' must have r=1");
    BundleExpr e = BundleExpr::atom(std::move(decl));
    atoms_.emplace(name, e);
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::optional<int> n_;
  std::map<std::string, BundleExpr> atoms_;
};

}  // namespace

ParsedExpr parse_bundle_expr(std::string_view text) { return Parser(text).parse(); }

std::string describe_atom(const AtomDecl& a) { return a.name + "{" + facts_text(a) + "}"; }

}  // namespace kspos
