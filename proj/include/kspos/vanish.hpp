#pragma once

// Positivity inference over bundle expressions, vanishing-theorem predicates,
// the flag-bundle direct-image rewrite, and Kunneth cohomology of twisted
// forms on P^a x P^b.

#include <optional>
#include <string>
#include <vector>

#include "kspos/bott.hpp"
#include "kspos/bundle_expr.hpp"
#include "kspos/omega.hpp"
#include "kspos/weights.hpp"

namespace kspos {

// ---------------------------------------------------------------------------
// Positivity facts

enum class FactKind {
  ks_positive,      // (k, s); griffiths k-positive is (k, 1)
  nakano_positive,
  k_positive_line,  // (k)
  k_ample,          // (k)
  semipositive_line,
  ample_line,
};

const char* to_string(FactKind kind) noexcept;

struct PositivityFact {
  FactKind kind = FactKind::ks_positive;
  int k = 0;
  int s = 0;
  std::string subject;              // canonical text of the bundle
  std::string rule;                 // rule id that produced it
  std::vector<std::string> premises;  // rendered premise facts

  /// "ks_positive(1,2)" etc.
  std::string label() const;
  /// Whether this fact implies `other` by monotonicity in k and s.
  bool entails(const PositivityFact& other) const noexcept;
};

/// Facts about one bundle, kept as the set of entailment-minimal facts.
class FactSet {
 public:
  /// Adds f unless an existing fact entails it; drops facts f entails.
  /// Returns true if the set changed.
  bool add(PositivityFact f);

  const std::vector<PositivityFact>& facts() const noexcept { return facts_; }
  bool entails(const PositivityFact& f) const;

  /// Smallest k with (k, s)-positivity entailed.
  const PositivityFact* best_ks(int s) const;
  const PositivityFact* best_k_positive_line() const;
  const PositivityFact* best_k_ample() const;
  const PositivityFact* nakano() const;
  const PositivityFact* semipositive_line() const;
  const PositivityFact* ample_line() const;

  /// Every entailed ks / k_positive_line / k_ample fact with k <= max_k,
  /// s <= max_s, tagged with the monotonicity rule that yields it.
  std::vector<PositivityFact> closure(int max_k, int max_s) const;

 private:
  std::vector<PositivityFact> facts_;
};

/// Least fact set obtained from declared atom facts by the propagation rules.
FactSet infer_positivity(const BundleExpr& e, int n);

// ---------------------------------------------------------------------------
// Vanishing predicates

struct Premise {
  std::string description;
  bool satisfied = false;
  std::string discharged_by;  // fact label and rule, if any
};

struct TheoremReport {
  std::string theorem_id;
  std::string citation;
  std::string subject;  // bundle the predicate is applied to, after normalisation
  int p = 0;
  int q = 0;
  std::vector<Premise> hypothesis_trace;
  bool vanishes = false;
  std::string conclusion;
  bool conjectural = false;
  std::string note;
};

struct QueryOptions {
  bool conjectural = false;
};

/// One report per theorem whose shape matches e (K_X (x) F at (0, q) is first
/// rewritten to F at (n, q)). Throws invalid_input unless 0 <= p, q <= n.
std::vector<TheoremReport> query_vanishing(const BundleExpr& e, int n, int p, int q, const QueryOptions& opt = {});

/// True if any non-conjectural report vanishes.
bool any_vanishes(const std::vector<TheoremReport>& reports);

// ---------------------------------------------------------------------------
// Flag-bundle rewrite

struct BlockGapCheck {
  int degree = 0;  // form degree the bound was evaluated at
  int block = 0;   // j, comparing blocks j and j+1 (1-based)
  int gap = 0;
  int needed = 0;
  bool ok = false;
};

struct ConditionCheck {
  bool ok = true;
  std::vector<BlockGapCheck> per_block;
};

/// Gap condition on a block weight that makes the higher direct images of
/// relative t-forms twisted by P_s^{a_s} vanish.
ConditionCheck check_block_gap_condition(const BlockWeight& a_s, int p);

struct RewriteTerm {
  Weight weight;          // a + u
  long long multiplicity = 0;
  bool dominant = false;  // non-dominant terms have no Schur module; kept raw
  int base_degree = 0;    // p in Omega^p_X
  int fibre_degree = 0;   // t
  std::string descriptor;
};

struct Rewrite {
  ConditionCheck condition;
  bool hypothesis_met = false;
  std::vector<RewriteTerm> terms;
  std::vector<std::string> warnings;
};

/// H^q(F_s(E), pi^*Omega^p_X (x) Omega^t_{F/X} (x) P_s^{a_s} (x) pi^*B) as a
/// sum over weights u of relative t-forms: nu(u, t) H^q(X, Omega^p(Gamma^{a+u}E (x) B)).
Rewrite glpsd_rewrite(const FlagType& s, const BlockWeight& a_s, int p, int t);

/// Dolbeault form for Omega^p of the flag bundle: fibre degrees t = 0..p with
/// base degree p - t, keeping only dominant a + u.
Rewrite dolbeault_rewrite(const FlagType& s, const BlockWeight& a_s, int p);

// ---------------------------------------------------------------------------
// Products of projective spaces

/// h^{p,q}(P^d, O(a)) = dim H^q(P^d, Omega^p(a)), 0 <= p, q <= d.
HodgeTable projective_twisted_hodge(int d, int a);

/// h^{p,q}(P^{d1} x P^{d2}, O(a) [x] O(b)) by Kunneth over the two factors.
HodgeTable product_projective_cohomology(int d1, int d2, int a, int b);

}  // namespace kspos
