#pragma once

// Bott's algorithm for homogeneous line bundles P^a on type-A flag manifolds.
//
// Shift a by -c_w/2, sort weakly decreasing, count strict inversions. A tie in
// the shifted sequence means every cohomology group vanishes; otherwise the
// cohomology is the irreducible GL(r)-module with highest weight
// sorted + c_w/2, concentrated in degree = #inversions.

#include <optional>

#include <boost/multiprecision/cpp_int.hpp>

#include "kspos/weights.hpp"

namespace kspos {

using BigInt = boost::multiprecision::cpp_int;

struct CohomologyResult {
  enum class Kind { zero, single };

  Kind kind = Kind::zero;
  int degree = 0;      // meaningful iff single
  Weight highest_weight;  // weakly decreasing iff single
  BigInt dimension = 0;

  bool is_zero() const noexcept { return kind == Kind::zero; }

  static CohomologyResult vanishing() { return {}; }
  friend bool operator==(const CohomologyResult&, const CohomologyResult&) = default;
};

CohomologyResult bott_cohomology(const Weight& a, int rank);
CohomologyResult bott_flag(const BlockWeight& a_s);

/// Weyl dimension formula prod_{i<j} (l_i - l_j + j - i) / (j - i), exact.
BigInt schur_dimension(const Weight& lambda, int rank);

/// sum_q (-1)^q dim H^q(F(V), P^a).
BigInt euler_characteristic(const Weight& a, int rank);

/// c_s - a_s, the weight of K tensor (P_s^{a_s})^{-1}.
BlockWeight serre_dual_block_weight(const BlockWeight& a_s);

}  // namespace kspos
