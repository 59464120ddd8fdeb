#include <doctest.h>

#include "kspos/bott.hpp"
#include "kspos/error.hpp"
#include "kspos/omega.hpp"
#include "oracles.hpp"

using namespace kspos;

TEST_CASE("roots of the parabolic nilradical") {
  const auto p1 = parabolic_roots(FlagType::complete(2));
  REQUIRE(p1.size() == 1);
  CHECK(p1[0].lo == 1);
  CHECK(p1[0].hi == 2);
  CHECK(p1[0].weight == Weight{-1, 1});
  CHECK(parabolic_roots(FlagType::projective(3)).size() == 2);
  CHECK(parabolic_roots(FlagType({0, 2, 4})).size() == 4);
}

TEST_CASE("exterior powers of the cotangent space") {
  for (int r = 1; r <= 5; ++r)
    for (const FlagType& s : all_flag_types(r)) {
      const int N = flag_dimension(s);
      const WeightedDecomposition zero = exterior_weights(s, 0);
      REQUIRE(zero.size() == 1);
      CHECK(zero.multiplicity(Weight::zero(r)) == 1);
      const WeightedDecomposition top = exterior_weights(s, N);
      REQUIRE(top.size() == 1);
      CHECK(top.terms().begin()->first == top_weight(s));
      CHECK(top.total_multiplicity() == 1);
      long long all = 0;
      for (int p = 0; p <= N; ++p) {
        const WeightedDecomposition w = exterior_weights(s, p);
        CHECK(w.total_multiplicity() == oracle::binom(N, p));
        all += w.total_multiplicity();
        // pairing with the complementary degree
        const WeightedDecomposition dual = exterior_weights(s, N - p);
        for (const auto& [u, nu] : w.terms()) CHECK(dual.multiplicity(top_weight(s) - u) == nu);
      }
      CHECK(all == (1LL << N));
      CHECK_THROWS_AS(exterior_weights(s, N + 1), Error);
      CHECK_THROWS_AS(exterior_weights(s, -1), Error);
    }
  const WeightedDecomposition p1 = exterior_weights(FlagType::complete(2), 1);
  REQUIRE(p1.size() == 1);
  CHECK(p1.multiplicity(Weight{-1, 1}) == 1);
}

TEST_CASE("top weight is the canonical weight") {
  CHECK(top_weight(FlagType::complete(2)) == Weight{-1, 1});
  CHECK(top_weight(FlagType::projective(3)) == Weight{-2, 1, 1});
  for (int r = 1; r <= 6; ++r) {
    CHECK(top_weight(FlagType::complete(r)) == canonical_weight_complete(r));
    for (const FlagType& s : all_flag_types(r)) CHECK(top_weight(s) == expand_block_weight(canonical_weight_flag(s)));
  }
}

TEST_CASE("root gap bound on exterior weights") {
  for (int r = 1; r <= 5; ++r)
    for (const FlagType& s : all_flag_types(r))
      for (int p = 0; p <= flag_dimension(s); ++p) {
        const RootGapCheck c = verify_root_gap_bound(s, p);
        CAPTURE(to_string(s));
        CAPTURE(p);
        CHECK(c.ok);
        CHECK(c.violations.empty());
      }
}

TEST_CASE("Hodge numbers of flag manifolds") {
  for (int d = 1; d <= 5; ++d) {
    const HodgeTable h = hodge_numbers(FlagType::projective(d + 1));
    REQUIRE(h.size() == static_cast<std::size_t>(d + 1));
    for (int p = 0; p <= d; ++p)
      for (int q = 0; q <= d; ++q) CHECK(h[p][q] == (p == q ? 1 : 0));
  }
  // off-diagonal vanishing and the diagonal against the Poincare polynomial
  for (int r = 1; r <= 4; ++r)
    for (const FlagType& s : all_flag_types(r)) {
      std::vector<int> sizes;
      for (int j = 1; j <= s.blocks(); ++j) sizes.push_back(s.block_size(j));
      const auto poincare = oracle::flag_poincare(sizes);
      const HodgeTable h = hodge_numbers(s);
      CAPTURE(to_string(s));
      REQUIRE(h.size() == poincare.size());
      for (std::size_t p = 0; p < h.size(); ++p)
        for (std::size_t q = 0; q < h.size(); ++q) CHECK(h[p][q] == (p == q ? poincare[p] : 0));
    }
  const HodgeTable f3 = hodge_numbers(FlagType::complete(3));
  CHECK(f3[0][0] == 1);
  CHECK(f3[1][1] == 2);
  CHECK(f3[2][2] == 2);
  CHECK(f3[3][3] == 1);
}
