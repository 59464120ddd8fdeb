#include "kspos/vanish.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include "kspos/error.hpp"

namespace kspos {

const char* to_string(FactKind kind) noexcept {
  switch (kind) {
    case FactKind::ks_positive: return "ks_positive";
    case FactKind::nakano_positive: return "nakano_positive";
    case FactKind::k_positive_line: return "k_positive_line";
    case FactKind::k_ample: return "k_ample";
    case FactKind::semipositive_line: return "semipositive_line";
    case FactKind::ample_line: return "ample_line";
  }
  return "?";
}

std::string PositivityFact::label() const {
  std::string out = to_string(kind);
  switch (kind) {
    case FactKind::ks_positive: return out + "(" + std::to_string(k) + "," + std::to_string(s) + ")";
    case FactKind::k_positive_line:
    case FactKind::k_ample: return out + "(" + std::to_string(k) + ")";
    default: return out;
  }
}

bool PositivityFact::entails(const PositivityFact& other) const noexcept {
  if (kind != other.kind) return false;
  switch (kind) {
    case FactKind::ks_positive: return k <= other.k && s >= other.s;
    case FactKind::k_positive_line:
    case FactKind::k_ample: return k <= other.k;
    default: return true;
  }
}

bool FactSet::add(PositivityFact f) {
  for (const auto& g : facts_)
    if (g.entails(f)) return false;
  std::erase_if(facts_, [&](const PositivityFact& g) { return f.entails(g); });
  facts_.push_back(std::move(f));
  std::stable_sort(facts_.begin(), facts_.end(), [](const PositivityFact& a, const PositivityFact& b) {
    return std::tuple(a.kind, a.k, -a.s) < std::tuple(b.kind, b.k, -b.s);
  });
  return true;
}

bool FactSet::entails(const PositivityFact& f) const {
  return std::any_of(facts_.begin(), facts_.end(), [&](const PositivityFact& g) { return g.entails(f); });
}

namespace {

const PositivityFact* find_min_k(const std::vector<PositivityFact>& facts, FactKind kind, int min_s = 0) {
  const PositivityFact* best = nullptr;
  for (const auto& f : facts)
    if (f.kind == kind && f.s >= min_s && (!best || f.k < best->k)) best = &f;
  return best;
}

const PositivityFact* find_kind(const std::vector<PositivityFact>& facts, FactKind kind) {
  for (const auto& f : facts)
    if (f.kind == kind) return &f;
  return nullptr;
}

}  // namespace

const PositivityFact* FactSet::best_ks(int s) const { return find_min_k(facts_, FactKind::ks_positive, s); }
const PositivityFact* FactSet::best_k_positive_line() const { return find_min_k(facts_, FactKind::k_positive_line); }
const PositivityFact* FactSet::best_k_ample() const { return find_min_k(facts_, FactKind::k_ample); }
const PositivityFact* FactSet::nakano() const { return find_kind(facts_, FactKind::nakano_positive); }
const PositivityFact* FactSet::semipositive_line() const { return find_kind(facts_, FactKind::semipositive_line); }
const PositivityFact* FactSet::ample_line() const { return find_kind(facts_, FactKind::ample_line); }

std::vector<PositivityFact> FactSet::closure(int max_k, int max_s) const {
  std::vector<PositivityFact> out;
  std::set<std::tuple<FactKind, int, int>> seen;
  auto emit = [&](const PositivityFact& base, int k, int s) {
    if (!seen.insert({base.kind, k, s}).second) return;
    if (k == base.k && s == base.s) {
      out.push_back(base);
      return;
    }
    PositivityFact f = base;
    f.k = k;
    f.s = s;
    f.rule = "monotone";
    f.premises = {base.subject + ": " + base.label() + " [" + base.rule + "]"};
    out.push_back(std::move(f));
  };
  for (const auto& f : facts_) {
    switch (f.kind) {
      case FactKind::ks_positive:
        for (int k = f.k; k <= max_k; ++k)
          for (int s = std::min(f.s, max_s); s >= 1; --s) emit(f, k, s);
        break;
      case FactKind::k_positive_line:
      case FactKind::k_ample:
        for (int k = f.k; k <= max_k; ++k) emit(f, k, 0);
        break;
      default: emit(f, f.k, f.s);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Inference

namespace {

using K = BundleExpr::Kind;

std::string cite(const PositivityFact& f) { return f.subject + ": " + f.label() + " [" + f.rule + "]"; }

int rank_as_int(const BundleExpr& e) {
  return static_cast<int>(std::min<long long>(e.rank(), std::numeric_limits<int>::max() / 2));
}

/// Largest meaningful s: tuples never exceed the larger side dimension.
int s_cap(const BundleExpr& e, int n) { return std::max(n, rank_as_int(e)); }

PositivityFact fact(FactKind kind, int k, int s, const BundleExpr& subject, std::string rule,
                    std::vector<std::string> premises) {
  PositivityFact f;
  f.kind = kind;
  f.k = k;
  f.s = s;
  f.subject = subject.str();
  f.rule = std::move(rule);
  f.premises = std::move(premises);
  return f;
}

PositivityFact ks_fact(int k, int s, const BundleExpr& subject, int n, std::string rule, std::vector<std::string> premises) {
  return fact(FactKind::ks_positive, k, std::min(s, s_cap(subject, n)), subject, std::move(rule), std::move(premises));
}

class Inference {
 public:
  explicit Inference(int n) : n_(n) {}

  const FactSet& infer(const BundleExpr& e) {
    if (auto it = memo_.find(e.str()); it != memo_.end()) return it->second;
    FactSet fs;
    for (auto& f : local_facts(e)) fs.add(std::move(f));
    saturate(fs, e);
    return memo_.emplace(e.str(), std::move(fs)).first->second;
  }

 private:
  // Equivalences that hold on a single bundle: Nakano = (0, s) for s >= min(n, r),
  // and for line bundles (k, 1) = k-positive, semipositive = n-positive.
  void saturate(FactSet& fs, const BundleExpr& e) {
    const int r = rank_as_int(e);
    const int cap = s_cap(e, n_);
    for (bool changed = true; changed;) {
      changed = false;
      const std::vector<PositivityFact> snapshot = fs.facts();
      for (const auto& f : snapshot) {
        const std::vector<std::string> from{cite(f)};
        switch (f.kind) {
          case FactKind::ks_positive:
            if (f.k == 0 && f.s >= std::min(n_, r))
              changed |= fs.add(fact(FactKind::nakano_positive, 0, 0, e, "nakano_equiv", from));
            if (r == 1) changed |= fs.add(fact(FactKind::k_positive_line, f.k, 0, e, "line_griffiths_equiv", from));
            break;
          case FactKind::nakano_positive:
            changed |= fs.add(ks_fact(0, cap, e, n_, "nakano_equiv", from));
            break;
          case FactKind::k_positive_line:
            changed |= fs.add(ks_fact(f.k, cap, e, n_, "line_griffiths_equiv", from));
            changed |= fs.add(fact(FactKind::semipositive_line, 0, 0, e, "k_positive_is_semipositive", from));
            break;
          case FactKind::semipositive_line:
            changed |= fs.add(fact(FactKind::k_positive_line, n_, 0, e, "semipositive_is_n_positive", from));
            break;
          case FactKind::ample_line:
            changed |= fs.add(fact(FactKind::k_positive_line, 0, 0, e, "ample_is_positive", from));
            break;
          case FactKind::k_ample:
            if (r == 1) changed |= fs.add(fact(FactKind::k_positive_line, f.k, 0, e, "k_ample_implies_k_positive", from));
            break;
        }
      }
    }
  }

  std::vector<PositivityFact> local_facts(const BundleExpr& e) {
    switch (e.kind()) {
      case K::atom: return atom_facts(e);
      case K::tensor: return tensor_facts(e, e.args());
      case K::sym_pow:
      case K::wedge_pow:
      case K::det:
      case K::schur:
      case K::tensor_pow: return schur_facts(e);
      case K::det_twist: {
        if (e.param() < 1) return {};
        std::vector<BundleExpr> parts{e.arg(), det_power(e.arg(), e.param())};
        return tensor_facts(e, parts);
      }
      case K::quotient: {
        const PositivityFact* g = infer(e.arg()).best_ks(1);
        if (!g) return {};
        return {ks_fact(g->k, 1, e, n_, "quotient", {cite(*g)})};
      }
      case K::flag_quotient_det: {
        const PositivityFact* g = infer(e.arg()).best_ks(1);
        if (!g) return {};
        return {fact(FactKind::k_positive_line, g->k, 0, e, "flag_quotient_det", {cite(*g)})};
      }
      case K::dual:
      case K::canonical_twist: return {};
    }
    return {};
  }

  static BundleExpr det_power(const BundleExpr& e, int m) {
    BundleExpr d = BundleExpr::det(e);
    return m == 1 ? d : BundleExpr::tensor_pow(d, m);
  }

  std::vector<PositivityFact> atom_facts(const BundleExpr& e) {
    const AtomDecl& a = e.atom_decl();
    const DeclaredFacts& d = a.facts;
    std::vector<PositivityFact> out;
    if (!d.pullback_from) {
      for (const auto& [k, s] : d.ks) out.push_back(ks_fact(k, s, e, n_, "declared", {}));
      if (d.nakano) out.push_back(fact(FactKind::nakano_positive, 0, 0, e, "declared", {}));
      if (d.k_positive) out.push_back(fact(FactKind::k_positive_line, *d.k_positive, 0, e, "declared", {}));
      if (d.k_ample) out.push_back(fact(FactKind::k_ample, *d.k_ample, 0, e, "declared", {}));
      if (d.semipositive) out.push_back(fact(FactKind::semipositive_line, 0, 0, e, "declared", {}));
      if (d.ample) out.push_back(fact(FactKind::ample_line, 0, 0, e, "declared", {}));
      return out;
    }
    // Facts were declared on the target of a surjection from the base; the
    // kernel bound grows by the fibre dimension.
    const int target = *d.pullback_from;
    if (target < 1 || target > n_)
      throw Error(Errc::malformed_expression, "atom " + a.name + ": pullback_from=" + std::to_string(target) +
                                                  " must lie in [1, n] for a surjection onto it");
    const int shift = n_ - target;
    auto on_target = [&](const std::string& what) {
      return std::vector<std::string>{a.name + " on the " + std::to_string(target) + "-dimensional target: " + what};
    };
    for (const auto& [k, s] : d.ks)
      out.push_back(ks_fact(k + shift, s, e, n_, "pullback",
                            on_target("ks_positive(" + std::to_string(k) + "," + std::to_string(s) + ")")));
    if (d.nakano)
      out.push_back(ks_fact(shift, std::max(target, a.rank), e, n_, "pullback", on_target("nakano_positive")));
    if (d.k_positive)
      out.push_back(fact(FactKind::k_positive_line, *d.k_positive + shift, 0, e, "pullback",
                         on_target("k_positive_line(" + std::to_string(*d.k_positive) + ")")));
    if (d.semipositive) out.push_back(fact(FactKind::semipositive_line, 0, 0, e, "pullback", on_target("semipositive_line")));
    if (d.ample)
      out.push_back(fact(FactKind::k_positive_line, shift, 0, e, "pullback", on_target("ample_line")));
    return out;
  }

  // Schur functors (and det, sym, wedge, tensor powers) keep (k, s)-positivity.
  std::vector<PositivityFact> schur_facts(const BundleExpr& e) {
    if (e.kind() == K::schur) {
      const auto& a = e.ints();
      if (a.back() < 0 || std::all_of(a.begin(), a.end(), [](int x) { return x == 0; })) return {};
    }
    const BundleExpr& arg = e.arg();
    const FactSet& inner = infer(arg);
    const std::string rule = e.kind() == K::tensor_pow ? "tensor_power" : "schur_functor";
    std::vector<PositivityFact> out;
    for (const auto& f : inner.facts()) {
      if (f.kind == FactKind::ks_positive) out.push_back(ks_fact(f.k, f.s, e, n_, rule, {cite(f)}));
      if (f.kind == FactKind::semipositive_line && arg.rank() == 1)
        out.push_back(fact(FactKind::semipositive_line, 0, 0, e, rule, {cite(f)}));
    }
    return out;
  }

  struct Option {
    int k;
    int s;
    std::vector<std::string> premises;
    bool twisted = false;  // a semipositive line was used as a pure twist
    bool bound = false;    // some factor actually carries (k, s)
  };

  static void keep_minimal(std::vector<Option>& opts) {
    std::vector<Option> out;
    for (auto& o : opts) {
      bool dominated = false;
      for (const auto& p : out) dominated |= (p.k <= o.k && p.s >= o.s && p.bound >= o.bound);
      if (dominated) continue;
      std::erase_if(out, [&](const Option& p) { return o.k <= p.k && o.s >= p.s && o.bound >= p.bound; });
      out.push_back(std::move(o));
    }
    opts = std::move(out);
  }

  /// (k, s) options of one factor; a semipositive line may also enter as a
  /// twist that leaves the other factors' bound unchanged.
  static std::vector<Option> options_of(const FactSet& fs, bool is_line) {
    std::vector<Option> out;
    for (const auto& f : fs.facts())
      if (f.kind == FactKind::ks_positive) out.push_back({f.k, f.s, {cite(f)}, false, true});
    if (is_line)
      if (const PositivityFact* sp = fs.semipositive_line())
        out.push_back({-1, std::numeric_limits<int>::max(), {cite(*sp)}, true, false});
    return out;
  }

  /// Pairs (E, det power of E) and (E^*, det power of E) inside a product,
  /// replaced by the stronger (k, s) bound they satisfy jointly.
  std::vector<Option> pair_options(const BundleExpr& x, const BundleExpr& y) {
    const auto dp = match_det_power(y);
    if (!dp || dp->second < 1) return {};
    const BundleExpr& base = dp->first;
    const int r = rank_as_int(base);
    const PositivityFact* g = infer(base).best_ks(1);
    if (!g) return {};
    const std::string exponent = "det power exponent " + std::to_string(dp->second);
    if (x == base) return {{g->k, std::min(r, n_), {cite(*g), exponent}, false, true}};
    if (x.kind() == K::dual && x.arg() == base && r >= 2)
      return {{g->k, std::min(dp->second, std::max(r, n_)), {cite(*g), "rank " + std::to_string(r) + " >= 2", exponent},
               false, true}};
    return {};
  }

  std::vector<PositivityFact> tensor_facts(const BundleExpr& e, const std::vector<BundleExpr>& parts) {
    std::vector<PositivityFact> out;
    const std::size_t m = parts.size();
    std::vector<std::vector<Option>> own(m);
    for (std::size_t i = 0; i < m; ++i) own[i] = options_of(infer(parts[i]), parts[i].rank() == 1);

    // c = max, s = min over the factors.
    auto fold = [&](std::vector<std::vector<Option>> groups, std::string head) {
      std::vector<Option> acc{{-1, std::numeric_limits<int>::max(), {}, false, false}};
      for (const auto& g : groups) {
        std::vector<Option> next;
        for (const auto& a : acc)
          for (const auto& b : g) {
            Option o{std::max(a.k, b.k), std::min(a.s, b.s), a.premises, a.twisted || b.twisted, a.bound || b.bound};
            o.premises.insert(o.premises.end(), b.premises.begin(), b.premises.end());
            next.push_back(std::move(o));
          }
        keep_minimal(next);
        acc = std::move(next);
      }
      for (auto& o : acc) {
        if (!o.bound) continue;
        std::string rule = head;
        auto append = [&](const char* part) { rule += (rule.empty() ? "" : "+") + std::string(part); };
        if (groups.size() >= 2) append("tensor_product");
        if (o.twisted) append("semipositive_twist");
        out.push_back(ks_fact(o.k, o.s, e, n_, rule, std::move(o.premises)));
      }
    };

    fold(own, "");
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j) continue;
        std::vector<Option> pair = pair_options(parts[i], parts[j]);
        if (pair.empty()) continue;
        std::vector<std::vector<Option>> groups{std::move(pair)};
        for (std::size_t t = 0; t < m; ++t)
          if (t != i && t != j) groups.push_back(own[t]);
        fold(std::move(groups), parts[i].kind() == K::dual ? "dual_det_power" : "det_twist");
      }

    std::vector<std::string> semi;
    for (std::size_t i = 0; i < m; ++i) {
      const PositivityFact* sp = parts[i].rank() == 1 ? infer(parts[i]).semipositive_line() : nullptr;
      if (!sp) break;
      semi.push_back(cite(*sp));
    }
    if (semi.size() == m) out.push_back(fact(FactKind::semipositive_line, 0, 0, e, "tensor_product", semi));
    return out;
  }

  int n_;
  std::map<std::string, FactSet> memo_;
};

}  // namespace

FactSet infer_positivity(const BundleExpr& e, int n) {
  if (n < 1) throw Error(Errc::invalid_input, "base dimension must be >= 1");
  return Inference(n).infer(e);
}

// ---------------------------------------------------------------------------
// Vanishing predicates

namespace {

Premise premise(std::string description, bool ok, std::string by = {}) {
  return Premise{std::move(description), ok, std::move(by)};
}

Premise fact_premise(const std::string& description, const PositivityFact* f) {
  return premise(description, f != nullptr, f ? cite(*f) : std::string{});
}

struct Query {
  const BundleExpr& subject;
  int n;
  int p;
  int q;
  Inference& inf;
};

TheoremReport start(std::string id, std::string citation, const Query& qy) {
  TheoremReport rep;
  rep.theorem_id = std::move(id);
  rep.citation = std::move(citation);
  rep.subject = qy.subject.str();
  rep.p = qy.p;
  rep.q = qy.q;
  return rep;
}

TheoremReport finish(TheoremReport rep) {
  rep.vanishes = std::all_of(rep.hypothesis_trace.begin(), rep.hypothesis_trace.end(),
                             [](const Premise& p) { return p.satisfied; });
  rep.conclusion = rep.vanishes ? "H^{" + std::to_string(rep.p) + "," + std::to_string(rep.q) + "}(X, " + rep.subject + ") = 0"
                                : "not applicable";
  return rep;
}

std::string ineq(const std::string& text, long long lhs, const char* op, long long rhs) {
  return text + " (" + std::to_string(lhs) + " " + op + " " + std::to_string(rhs) + ")";
}

const PositivityFact* semipositive_of(Inference& inf, const BundleExpr& b) {
  return inf.infer(b).semipositive_line();
}

TheoremReport nakano_report(const Query& qy) {
  auto rep = start("nakano", "Nakano vanishing theorem", qy);
  rep.hypothesis_trace.push_back(fact_premise("E is Nakano positive", qy.inf.infer(qy.subject).nakano()));
  rep.hypothesis_trace.push_back(premise(ineq("p = n", qy.p, "=", qy.n), qy.p == qy.n));
  rep.hypothesis_trace.push_back(premise(ineq("q >= 1", qy.q, ">=", 1), qy.q >= 1));
  return finish(std::move(rep));
}

TheoremReport gigante_girbau_report(const Query& qy) {
  auto rep = start("gigante_girbau", "Gigante-Girbau vanishing theorem for k-positive line bundles", qy);
  const PositivityFact* f = qy.inf.infer(qy.subject).best_k_positive_line();
  rep.hypothesis_trace.push_back(fact_premise("B is a k-positive line bundle", f));
  rep.hypothesis_trace.push_back(f ? premise(ineq("p + q > n + k", qy.p + qy.q, ">", qy.n + f->k), qy.p + qy.q > qy.n + f->k)
                                   : premise("p + q > n + k (k unknown)", false));
  return finish(std::move(rep));
}

TheoremReport griffiths_total_report(const Query& qy) {
  auto rep = start("griffiths_k_total_degree", "total-degree vanishing for Griffiths k-positive bundles", qy);
  const PositivityFact* f = qy.inf.infer(qy.subject).best_ks(1);
  const long long r = qy.subject.rank();
  rep.hypothesis_trace.push_back(fact_premise("E is Griffiths k-positive", f));
  rep.hypothesis_trace.push_back(f ? premise(ineq("p + q >= n + k + r", qy.p + qy.q, ">=", qy.n + f->k + r),
                                             qy.p + qy.q >= qy.n + f->k + r)
                                   : premise("p + q >= n + k + r (k unknown)", false));
  return finish(std::move(rep));
}

int s_star(int n, int q, long long r) { return static_cast<int>(std::min<long long>(n - q + 1, r)); }

TheoremReport ks_top_report(const Query& qy) {
  auto rep = start("ks_positive_top_degree", "top-degree vanishing for (k,s)-positive bundles", qy);
  const int s = std::max(1, s_star(qy.n, qy.q, qy.subject.rank()));
  const PositivityFact* f = qy.inf.infer(qy.subject).best_ks(s);
  rep.hypothesis_trace.push_back(fact_premise("E is (k,s)-positive with s >= min(n-q+1, r) = " + std::to_string(s), f));
  rep.hypothesis_trace.push_back(premise(ineq("p = n", qy.p, "=", qy.n), qy.p == qy.n));
  rep.hypothesis_trace.push_back(f ? premise(ineq("q > k", qy.q, ">", f->k), qy.q > f->k) : premise("q > k (k unknown)", false));
  return finish(std::move(rep));
}

TheoremReport sommese_report(const Query& qy) {
  auto rep = start("sommese_k_ample", "Sommese vanishing theorem for k-ample bundles", qy);
  const PositivityFact* f = qy.inf.infer(qy.subject).best_k_ample();
  const long long r = qy.subject.rank();
  rep.hypothesis_trace.push_back(fact_premise("E is k-ample", f));
  rep.hypothesis_trace.push_back(f ? premise(ineq("p + q >= n + r + k", qy.p + qy.q, ">=", qy.n + r + f->k),
                                             qy.p + qy.q >= qy.n + r + f->k)
                                   : premise("p + q >= n + r + k (k unknown)", false));
  return finish(std::move(rep));
}

TheoremReport conjectural_report(const Query& qy) {
  auto rep = start("conjectural_ks", "conjectured all-degree vanishing for (k,s)-positive bundles", qy);
  const int s = std::max(1, s_star(qy.n, qy.q, qy.subject.rank()));
  const PositivityFact* f = qy.inf.infer(qy.subject).best_ks(s);
  rep.hypothesis_trace.push_back(fact_premise("E is (k,s)-positive with s >= min(n-q+1, r) = " + std::to_string(s), f));
  rep.hypothesis_trace.push_back(f ? premise(ineq("p + q > n + k", qy.p + qy.q, ">", qy.n + f->k), qy.p + qy.q > qy.n + f->k)
                                   : premise("p + q > n + k (k unknown)", false));
  rep = finish(std::move(rep));
  rep.conjectural = true;
  rep.note = "open conjecture; a Vanishes verdict here is not a proof";
  return rep;
}

/// Product factors with dettwist<m>(E) unfolded to E, det(E)^m.
std::vector<BundleExpr> unfolded_factors(const BundleExpr& e) {
  std::vector<BundleExpr> out;
  for (const auto& f : tensor_factors(e)) {
    if (f.kind() == K::det_twist && f.param() >= 1) {
      out.push_back(f.arg());
      BundleExpr d = BundleExpr::det(f.arg());
      out.push_back(f.param() == 1 ? d : BundleExpr::tensor_pow(d, f.param()));
    } else {
      out.push_back(f);
    }
  }
  return out;
}

/// Calls visit(i, j, rest) for ordered pairs of distinct factor indices, where
/// rest lists the remaining indices.
template <class F>
void for_each_pair(std::size_t m, F&& visit) {
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      std::vector<std::size_t> rest;
      for (std::size_t t = 0; t < m; ++t)
        if (t != i && t != j) rest.push_back(t);
      visit(i, j, rest);
    }
}

/// Keeps the first report whose premises all hold, else the first report.
void offer(std::optional<TheoremReport>& best, TheoremReport rep) {
  if (!best || (!best->vanishes && rep.vanishes)) best = std::move(rep);
}

std::optional<TheoremReport> det_twist_report(const Query& qy, const std::vector<BundleExpr>& fs) {
  if (fs.size() != 2) return std::nullopt;
  std::optional<TheoremReport> best;
  for_each_pair(2, [&](std::size_t i, std::size_t j, const std::vector<std::size_t>&) {
    const auto dp = match_det_power(fs[j]);
    if (!dp || dp->second != 1 || !(dp->first == fs[i])) return;
    const BundleExpr& E = fs[i];
    auto rep = start("canonical_det_twist", "top-degree vanishing for E (x) det E", qy);
    const PositivityFact* g = qy.inf.infer(E).best_ks(1);
    rep.hypothesis_trace.push_back(fact_premise("E = " + E.str() + " is Griffiths k-positive", g));
    rep.hypothesis_trace.push_back(premise(ineq("rank E >= 2", E.rank(), ">=", 2), E.rank() >= 2));
    rep.hypothesis_trace.push_back(premise(ineq("p = n", qy.p, "=", qy.n), qy.p == qy.n));
    rep.hypothesis_trace.push_back(g ? premise(ineq("q > k", qy.q, ">", g->k), qy.q > g->k) : premise("q > k (k unknown)", false));
    offer(best, finish(std::move(rep)));
  });
  return best;
}

std::optional<TheoremReport> dual_det_report(const Query& qy, const std::vector<BundleExpr>& fs) {
  if (fs.size() != 2) return std::nullopt;
  std::optional<TheoremReport> best;
  for_each_pair(2, [&](std::size_t i, std::size_t j, const std::vector<std::size_t>&) {
    if (fs[i].kind() != K::dual) return;
    const auto dp = match_det_power(fs[j]);
    if (!dp || !(dp->first == fs[i].arg())) return;
    const BundleExpr& E = dp->first;
    const int s = dp->second;
    auto rep = start("canonical_dual_det_power", "top-degree vanishing for E^* (x) (det E)^s", qy);
    const PositivityFact* g = qy.inf.infer(E).best_ks(1);
    rep.hypothesis_trace.push_back(fact_premise("E = " + E.str() + " is Griffiths k-positive", g));
    rep.hypothesis_trace.push_back(premise(ineq("rank E >= 2", E.rank(), ">=", 2), E.rank() >= 2));
    rep.hypothesis_trace.push_back(premise(ineq("p = n", qy.p, "=", qy.n), qy.p == qy.n));
    rep.hypothesis_trace.push_back(g ? premise(ineq("q > k", qy.q, ">", g->k), qy.q > g->k) : premise("q > k (k unknown)", false));
    const int need = s_star(qy.n, qy.q, E.rank());
    rep.hypothesis_trace.push_back(premise(ineq("s >= min(n-q+1, r)", s, ">=", need), s >= need));
    offer(best, finish(std::move(rep)));
  });
  return best;
}

void push_semipositive(TheoremReport& rep, Inference& inf, const std::optional<BundleExpr>& b) {
  if (b) rep.hypothesis_trace.push_back(fact_premise("B = " + b->str() + " is semipositive", semipositive_of(inf, *b)));
}

/// rest must be empty or a single line-bundle factor.
bool optional_line(const std::vector<BundleExpr>& fs, const std::vector<std::size_t>& rest, std::optional<BundleExpr>& b) {
  if (rest.empty()) return true;
  if (rest.size() != 1 || fs[rest[0]].rank() != 1) return false;
  b = fs[rest[0]];
  return true;
}

std::optional<TheoremReport> schur_det_report(const Query& qy, const std::vector<BundleExpr>& fs) {
  if (fs.size() < 2 || fs.size() > 3) return std::nullopt;
  std::optional<TheoremReport> best;
  for_each_pair(fs.size(), [&](std::size_t i, std::size_t j, const std::vector<std::size_t>& rest) {
    const auto sp = match_schur_power(fs[i]);
    const auto dp = match_det_power(fs[j]);
    if (!sp || !dp || !(sp->first == dp->first)) return;
    std::optional<BundleExpr> b;
    if (!optional_line(fs, rest, b)) return;
    const BundleExpr& E = sp->first;
    const Weight& a = sp->second;
    const int r = a.rank();
    const int h = static_cast<int>(std::count_if(a.begin(), a.end(), [](int x) { return x > 0; }));
    auto rep = start("schur_det_twist", "Schur power with determinant twist, via the flag-bundle isomorphism", qy);
    const PositivityFact* g = qy.inf.infer(E).best_ks(1);
    rep.hypothesis_trace.push_back(fact_premise("E = " + E.str() + " is Griffiths k-positive", g));
    push_semipositive(rep, qy.inf, b);
    rep.hypothesis_trace.push_back(premise("a = " + to_string(a) + " has a_r = 0 and h = #{a_i > 0} = " + std::to_string(h) +
                                               " in [1, r-1]",
                                           a[r - 1] == 0 && h >= 1 && h <= r - 1));
    rep.hypothesis_trace.push_back(premise(ineq("det exponent equals h", dp->second, "=", h), dp->second == h));
    rep.hypothesis_trace.push_back(premise(ineq("p = n", qy.p, "=", qy.n), qy.p == qy.n));
    rep.hypothesis_trace.push_back(g ? premise(ineq("q > k", qy.q, ">", g->k), qy.q > g->k) : premise("q > k (k unknown)", false));
    offer(best, finish(std::move(rep)));
  });
  return best;
}

TheoremReport tensor_power_body(const Query& qy, const BundleExpr& E, int l, int m, const std::optional<BundleExpr>& b) {
  auto rep = start("tensor_power_det_twist", "tensor power with determinant twist, via the flag-bundle isomorphism", qy);
  const PositivityFact* g = qy.inf.infer(E).best_ks(1);
  const long long r = E.rank();
  rep.hypothesis_trace.push_back(fact_premise("E = " + E.str() + " is Griffiths k-positive", g));
  push_semipositive(rep, qy.inf, b);
  rep.hypothesis_trace.push_back(premise(ineq("l >= 1", l, ">=", 1), l >= 1));
  rep.hypothesis_trace.push_back(premise(ineq("m >= n - p + r - 1", m, ">=", qy.n - qy.p + r - 1), m >= qy.n - qy.p + r - 1));
  rep.hypothesis_trace.push_back(g ? premise(ineq("p + q > n + k", qy.p + qy.q, ">", qy.n + g->k), qy.p + qy.q > qy.n + g->k)
                                   : premise("p + q > n + k (k unknown)", false));
  rep.note = "E and B are read as in the determinant-twist theorem: E Griffiths k-positive, B semipositive";
  return finish(std::move(rep));
}

std::pair<BundleExpr, int> split_power(const BundleExpr& f) {
  if (f.kind() == K::tensor_pow) return {f.arg(), f.param()};
  return {f, 1};
}

std::optional<TheoremReport> tensor_power_report(const Query& qy, const std::vector<BundleExpr>& fs) {
  std::optional<TheoremReport> best;
  // Without a determinant factor: E^l [(x) B].
  for (std::size_t i = 0; i < fs.size() && fs.size() <= 2; ++i) {
    std::vector<std::size_t> rest;
    for (std::size_t t = 0; t < fs.size(); ++t)
      if (t != i) rest.push_back(t);
    std::optional<BundleExpr> b;
    if (!optional_line(fs, rest, b)) continue;
    const auto [E, l] = split_power(fs[i]);
    offer(best, tensor_power_body(qy, E, l, 0, b));
  }
  if (fs.size() >= 2 && fs.size() <= 3)
    for_each_pair(fs.size(), [&](std::size_t i, std::size_t j, const std::vector<std::size_t>& rest) {
      const auto [E, l] = split_power(fs[i]);
      const auto dp = match_det_power(fs[j]);
      if (!dp || !(dp->first == E)) return;
      std::optional<BundleExpr> b;
      if (!optional_line(fs, rest, b)) return;
      offer(best, tensor_power_body(qy, E, l, dp->second, b));
    });
  return best;
}

constexpr int kFlagSearchMaxRank = 6;

struct FlagWitness {
  FlagType s;
  BlockWeight a_s;
  Weight u;
  int dimension;
};

/// Smallest-dimension flag type s, u in the weights of degree-p forms, and a
/// strictly decreasing a_s >= 0 satisfying the gap condition with b = a + u.
std::optional<FlagWitness> find_flag_witness(const Weight& b, int p) {
  const int r = b.rank();
  std::optional<FlagWitness> best;
  for (const FlagType& s : all_flag_types(r)) {
    if (s.blocks() < 2) continue;
    const int N = flag_dimension(s);
    if (p > N || (best && best->dimension <= N)) continue;
    for (const auto src = exterior_weights(s, p); const auto& [u, nu] : src.terms()) {
      const Weight a = b - u;
      std::vector<int> blocks;
      bool constant = true;
      for (int j = 1; j <= s.blocks() && constant; ++j) {
        const int v = a[s.cut(j - 1)];
        for (int i = s.cut(j - 1); i < s.cut(j); ++i) constant &= (a[i] == v);
        blocks.push_back(v);
      }
      if (!constant || blocks.back() < 0) continue;
      if (std::adjacent_find(blocks.begin(), blocks.end(), std::less_equal<>{}) != blocks.end()) continue;
      BlockWeight a_s(blocks, s);
      if (!check_block_gap_condition(a_s, p).ok) continue;
      best = FlagWitness{s, a_s, u, N};
      break;
    }
  }
  return best;
}

std::optional<TheoremReport> glpsd_report(const Query& qy, const std::vector<BundleExpr>& fs) {
  if (fs.empty() || fs.size() > 2) return std::nullopt;
  std::optional<TheoremReport> best;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    std::vector<std::size_t> rest;
    for (std::size_t t = 0; t < fs.size(); ++t)
      if (t != i) rest.push_back(t);
    std::optional<BundleExpr> b;
    if (!optional_line(fs, rest, b)) continue;
    const auto sp = match_schur_power(fs[i]);
    if (!sp) continue;
    const Weight& w = sp->second;
    if (w.rank() < 2 || w.rank() > kFlagSearchMaxRank) continue;
    const BundleExpr& E = sp->first;
    auto rep = start("flag_bundle_glpsd", "flag-bundle vanishing via the Griffiths-Le Potier-Schneider-Demailly isomorphism", qy);
    const PositivityFact* g = qy.inf.infer(E).best_ks(1);
    rep.hypothesis_trace.push_back(fact_premise("E = " + E.str() + " is Griffiths k-positive", g));
    push_semipositive(rep, qy.inf, b);
    const auto wit = find_flag_witness(w, qy.p);
    rep.hypothesis_trace.push_back(premise(
        "b = " + to_string(w) + " equals a + u with u a degree-p form weight on F_s and a_s strictly decreasing, a_m >= 0, "
        "satisfying the gap condition",
        wit.has_value(),
        wit ? "s = " + to_string(wit->s) + ", a_s = " + to_string(Weight(wit->a_s.entries())) + ", u = " + to_string(wit->u) +
                  ", N_s = " + std::to_string(wit->dimension)
            : std::string{}));
    if (g && wit)
      rep.hypothesis_trace.push_back(premise(ineq("p + q > n + k + N_s", qy.p + qy.q, ">", qy.n + g->k + wit->dimension),
                                             qy.p + qy.q > qy.n + g->k + wit->dimension));
    else
      rep.hypothesis_trace.push_back(premise("p + q > n + k + N_s (k or s unknown)", false));
    offer(best, finish(std::move(rep)));
  }
  return best;
}

}  // namespace

std::vector<TheoremReport> query_vanishing(const BundleExpr& e, int n, int p, int q, const QueryOptions& opt) {
  if (n < 1) throw Error(Errc::invalid_input, "base dimension must be >= 1");
  if (p < 0 || p > n || q < 0 || q > n)
    throw Error(Errc::invalid_input, "need 0 <= p, q <= n (p=" + std::to_string(p) + ", q=" + std::to_string(q) +
                                         ", n=" + std::to_string(n) + ")");

  // K_X (x) F in degree (0, q) is F in degree (n, q).
  BundleExpr subject = e;
  if (e.kind() == K::tensor) {
    std::vector<BundleExpr> rest;
    std::optional<BundleExpr> k_part;
    for (const auto& f : e.args()) {
      if (f.kind() == K::canonical_twist)
        k_part = f.arg();
      else
        rest.push_back(f);
    }
    if (k_part) {
      rest.push_back(*k_part);
      subject = BundleExpr::canonical_twist(BundleExpr::tensor(std::move(rest)));
    }
  }
  if (subject.kind() == K::canonical_twist) {
    if (p != 0) return {};
    subject = subject.arg();
    p = n;
  }

  Inference inf(n);
  const Query qy{subject, n, p, q, inf};
  const std::vector<BundleExpr> fs = unfolded_factors(subject);

  std::vector<TheoremReport> out;
  out.push_back(nakano_report(qy));
  if (subject.rank() == 1) out.push_back(gigante_girbau_report(qy));
  out.push_back(griffiths_total_report(qy));
  out.push_back(ks_top_report(qy));
  if (auto r = det_twist_report(qy, fs)) out.push_back(std::move(*r));
  if (auto r = dual_det_report(qy, fs)) out.push_back(std::move(*r));
  out.push_back(sommese_report(qy));
  if (auto r = schur_det_report(qy, fs)) out.push_back(std::move(*r));
  if (auto r = tensor_power_report(qy, fs)) out.push_back(std::move(*r));
  if (auto r = glpsd_report(qy, fs)) out.push_back(std::move(*r));
  if (opt.conjectural) out.push_back(conjectural_report(qy));
  return out;
}

bool any_vanishes(const std::vector<TheoremReport>& reports) {
  return std::any_of(reports.begin(), reports.end(), [](const TheoremReport& r) { return r.vanishes && !r.conjectural; });
}

// ---------------------------------------------------------------------------
// Flag-bundle rewrite

ConditionCheck check_block_gap_condition(const BlockWeight& a_s, int p) {
  const FlagType& s = a_s.flag();
  const int N = flag_dimension(s);
  const int r = s.rank();
  ConditionCheck out;
  for (int j = 1; j < s.blocks(); ++j) {
    BlockGapCheck c;
    c.degree = p;
    c.block = j;
    c.gap = a_s[static_cast<std::size_t>(j - 1)] - a_s[static_cast<std::size_t>(j)];
    if (p == N)
      c.needed = 1;
    else
      c.needed = std::min({p, N - p + (s.cut(j + 1) - s.cut(j)) - 1, r + 1 - (s.cut(j + 1) - s.cut(j - 1))});
    c.ok = c.gap >= c.needed;
    out.ok = out.ok && c.ok;
    out.per_block.push_back(c);
  }
  return out;
}

namespace {

std::string descriptor(int base_degree, const Weight& w) {
  return "H^q(X, Ω^" + std::to_string(base_degree) + "(Γ^" + to_string(w) + "E ⊗ B))";
}

void check_rewrite_args(const FlagType& s, const BlockWeight& a_s) {
  if (!(a_s.flag() == s)) throw Error(Errc::invalid_input, "block weight belongs to a different flag type");
}

}  // namespace

Rewrite glpsd_rewrite(const FlagType& s, const BlockWeight& a_s, int p, int t) {
  check_rewrite_args(s, a_s);
  const int N = flag_dimension(s);
  if (t < 0 || t > N) throw Error(Errc::invalid_input, "fibre degree t must lie in [0, N_s]");
  if (p < 0) throw Error(Errc::invalid_input, "base degree p must be >= 0");
  Rewrite out;
  out.condition = check_block_gap_condition(a_s, t);
  out.hypothesis_met = out.condition.ok;
  if (!out.hypothesis_met)
    out.warnings.push_back("hypothesis unmet: gap condition fails at fibre degree " + std::to_string(t));
  const Weight a = expand_block_weight(a_s);
  for (const auto src = exterior_weights(s, t); const auto& [u, nu] : src.terms()) {
    RewriteTerm term;
    term.weight = a + u;
    term.multiplicity = nu;
    term.dominant = term.weight.is_dominant();
    term.base_degree = p;
    term.fibre_degree = t;
    term.descriptor = descriptor(p, term.weight);
    if (!term.dominant) out.warnings.push_back("non-dominant weight " + to_string(term.weight) + " kept raw");
    out.terms.push_back(std::move(term));
  }
  return out;
}

Rewrite dolbeault_rewrite(const FlagType& s, const BlockWeight& a_s, int p) {
  check_rewrite_args(s, a_s);
  if (p < 0) throw Error(Errc::invalid_input, "form degree p must be >= 0");
  const int N = flag_dimension(s);
  Rewrite out;
  out.hypothesis_met = true;
  for (int t = 0; t <= std::min(p, N); ++t) {
    Rewrite part = glpsd_rewrite(s, a_s, p - t, t);
    out.hypothesis_met = out.hypothesis_met && part.hypothesis_met;
    out.condition.ok = out.condition.ok && part.condition.ok;
    out.condition.per_block.insert(out.condition.per_block.end(), part.condition.per_block.begin(),
                                   part.condition.per_block.end());
    if (!part.hypothesis_met) out.warnings.push_back(part.warnings.front());
    for (auto& term : part.terms)
      if (term.dominant) out.terms.push_back(std::move(term));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Products of projective spaces

HodgeTable projective_twisted_hodge(int d, int a) {
  if (d < 1) throw Error(Errc::invalid_input, "projective dimension must be >= 1");
  const FlagType s = FlagType::projective(d + 1);
  Weight twist = Weight::zero(d + 1);
  twist[0] = a;
  HodgeTable h(static_cast<std::size_t>(d + 1), std::vector<BigInt>(static_cast<std::size_t>(d + 1), 0));
  for (int p = 0; p <= d; ++p)
    for (const auto src = exterior_weights(s, p); const auto& [u, nu] : src.terms()) {
      const CohomologyResult c = bott_cohomology(u + twist, d + 1);
      if (!c.is_zero()) h[p][c.degree] += nu * c.dimension;
    }
  return h;
}

HodgeTable product_projective_cohomology(int d1, int d2, int a, int b) {
  const HodgeTable h1 = projective_twisted_hodge(d1, a);
  const HodgeTable h2 = projective_twisted_hodge(d2, b);
  const int n = d1 + d2;
  HodgeTable h(static_cast<std::size_t>(n + 1), std::vector<BigInt>(static_cast<std::size_t>(n + 1), 0));
  for (int p1 = 0; p1 <= d1; ++p1)
    for (int q1 = 0; q1 <= d1; ++q1) {
      if (h1[p1][q1] == 0) continue;
      for (int p2 = 0; p2 <= d2; ++p2)
        for (int q2 = 0; q2 <= d2; ++q2) h[p1 + p2][q1 + q2] += h1[p1][q1] * h2[p2][q2];
    }
  return h;
}

}  // namespace kspos
