#include "kspos/bott.hpp"

#include <string>

#include "kspos/error.hpp"

namespace kspos {

CohomologyResult bott_cohomology(const Weight& a, int rank) {
  if (rank < 1) throw Error(Errc::invalid_rank, "rank must be >= 1");
  if (a.rank() != rank)
    throw Error(Errc::invalid_input, "weight " + to_string(a) + " does not have length " +
                                         std::to_string(rank));

  const ShiftedSequence shifted = shift_by_half_canonical(a);
  const SortResult sorted = sort_desc_count_inversions(shifted.doubled_entries);
  if (sorted.has_ties) return CohomologyResult::vanishing();

  // (sorted + c_w) / 2; distinct entries of equal parity make this integral.
  const Weight c_w = canonical_weight_complete(rank);
  std::vector<int> hat(static_cast<std::size_t>(rank));
  for (int i = 0; i < rank; ++i) hat[i] = (sorted.sorted[i] + c_w[i]) / 2;

  CohomologyResult out;
  out.kind = CohomologyResult::Kind::single;
  out.degree = sorted.inversions;
  out.highest_weight = Weight(std::move(hat));
  out.dimension = schur_dimension(out.highest_weight, rank);
  return out;
}

CohomologyResult bott_flag(const BlockWeight& a_s) {
  const Weight a = expand_block_weight(a_s);
  return bott_cohomology(a, a.rank());
}

BigInt schur_dimension(const Weight& lambda, int rank) {
  if (lambda.rank() != rank) throw Error(Errc::invalid_input, "weight length differs from rank");
  if (!lambda.is_dominant())
    throw Error(Errc::invalid_input, "schur_dimension needs a weakly decreasing weight, got " +
                                         to_string(lambda));
  // Numerator and denominator accumulated separately; the quotient is exact.
  BigInt num = 1;
  BigInt den = 1;
  for (int i = 0; i < rank; ++i)
    for (int j = i + 1; j < rank; ++j) {
      num *= BigInt(lambda[i]) - lambda[j] + (j - i);
      den *= j - i;
    }
  return num / den;
}

BigInt euler_characteristic(const Weight& a, int rank) {
  const CohomologyResult h = bott_cohomology(a, rank);
  if (h.is_zero()) return 0;
  return (h.degree % 2 == 0) ? h.dimension : BigInt(-h.dimension);
}

BlockWeight serre_dual_block_weight(const BlockWeight& a_s) {
  const BlockWeight c_s = canonical_weight_flag(a_s.flag());
  std::vector<int> dual(a_s.entries().size());
  for (std::size_t j = 0; j < dual.size(); ++j) dual[j] = c_s[j] - a_s[j];
  return BlockWeight(std::move(dual), a_s.flag());
}

}  // namespace kspos
