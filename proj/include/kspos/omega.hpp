#pragma once

// Weights of the exterior powers of the cotangent representation of a flag
// manifold, and the Hodge numbers they produce through Bott's algorithm.
//
// Sign convention: the line bundle P^u is P_1^{u_1} x ... x P_r^{u_r}, and the
// cotangent root for the pair (lambda, mu), block(lambda) < block(mu), has
// weight -e_lambda + e_mu (the summand P_lambda^{-1} x P_mu of Omega^1). With
// this choice the top exterior power has weight expand(c_s), the canonical
// weight.

#include <map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "kspos/weights.hpp"

namespace kspos {

struct ParabolicRoot {
  int lo = 0;  // 1-based lambda
  int hi = 0;  // 1-based mu, block(lo) < block(hi)
  Weight weight;
};

/// Distinct weights with positive multiplicities, ordered lexicographically.
class WeightedDecomposition {
 public:
  using Map = std::map<Weight, long long>;

  void add(const Weight& w, long long multiplicity);
  const Map& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  long long total_multiplicity() const noexcept;
  long long multiplicity(const Weight& w) const;
  bool contains(const Weight& w) const { return terms_.count(w) != 0; }

  friend bool operator==(const WeightedDecomposition&, const WeightedDecomposition&) = default;

 private:
  Map terms_;
};

std::vector<ParabolicRoot> parabolic_roots(const FlagType& s);

/// Weights of wedge^p of the cotangent space: all p-subsets of roots, summed.
WeightedDecomposition exterior_weights(const FlagType& s, int p);

/// The unique weight of wedge^{N_s}.
Weight top_weight(const FlagType& s);

struct RootGapViolation {
  Weight u;
  int lambda = 0;
  int mu = 0;
  int bound = 0;
};

struct RootGapCheck {
  bool ok = true;
  std::vector<RootGapViolation> violations;
};

/// Checks u_mu - u_lambda <= min{p+1, r+1-(mu-lambda), N_s-p+(s_{j+1}-s_{j-1})}
/// for s_{j-1} < lambda <= s_j < mu <= s_{j+1}. The bound is stated for the
/// weights of wedge^p(gl/b_s)^* in the coadjoint convention, which are the
/// negatives of the P^u weights returned by exterior_weights; `u` in a
/// violation is reported in that convention.
RootGapCheck verify_root_gap_bound(const FlagType& s, int p);

using HodgeTable = std::vector<std::vector<boost::multiprecision::cpp_int>>;

/// h[p][q] = sum over (u, nu) in exterior_weights(s, p) of nu * dim H^q(P^u).
HodgeTable hodge_numbers(const FlagType& s);

}  // namespace kspos
