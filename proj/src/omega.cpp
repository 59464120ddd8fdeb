#include "kspos/omega.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "kspos/bott.hpp"
#include "kspos/error.hpp"

namespace kspos {

void WeightedDecomposition::add(const Weight& w, long long multiplicity) {
  if (multiplicity <= 0) throw Error(Errc::invalid_input, "multiplicity must be positive");
  terms_[w] += multiplicity;
}

long long WeightedDecomposition::total_multiplicity() const noexcept {
  long long total = 0;
  for (const auto& [w, m] : terms_) total += m;
  return total;
}

long long WeightedDecomposition::multiplicity(const Weight& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? 0 : it->second;
}

std::vector<ParabolicRoot> parabolic_roots(const FlagType& s) {
  const int r = s.rank();
  std::vector<ParabolicRoot> roots;
  for (int lo = 1; lo <= r; ++lo)
    for (int hi = 1; hi <= r; ++hi) {
      if (s.block_of(lo - 1) >= s.block_of(hi - 1)) continue;
      Weight w = Weight::zero(r);
      w[lo - 1] -= 1;
      w[hi - 1] += 1;
      roots.push_back({lo, hi, std::move(w)});
    }
  return roots;
}

WeightedDecomposition exterior_weights(const FlagType& s, int p) {
  const std::vector<ParabolicRoot> roots = parabolic_roots(s);
  const int n = static_cast<int>(roots.size());
  if (p < 0 || p > n)
    throw Error(Errc::invalid_input,
                "exterior degree " + std::to_string(p) + " outside [0, " + std::to_string(n) + "]");

  WeightedDecomposition out;
  // Walk p-subsets in lexicographic order of root indices.
  std::vector<int> pick(static_cast<std::size_t>(p));
  std::iota(pick.begin(), pick.end(), 0);
  Weight sum = Weight::zero(s.rank());
  while (true) {
    sum = Weight::zero(s.rank());
    for (int idx : pick) sum += roots[idx].weight;
    out.add(sum, 1);
    int i = p - 1;
    while (i >= 0 && pick[i] == n - p + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < p; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

Weight top_weight(const FlagType& s) {
  Weight w = Weight::zero(s.rank());
  for (const auto& root : parabolic_roots(s)) w += root.weight;
  return w;
}

RootGapCheck verify_root_gap_bound(const FlagType& s, int p) {
  const int r = s.rank();
  const int n_s = flag_dimension(s);
  RootGapCheck out;
  for (const auto src = exterior_weights(s, p); const auto& [weight, mult] : src.terms()) {
    const Weight u = -weight;
    for (int j = 1; j < s.blocks(); ++j)
      for (int lambda = s.cut(j - 1) + 1; lambda <= s.cut(j); ++lambda)
        for (int mu = s.cut(j) + 1; mu <= s.cut(j + 1); ++mu) {
          const int bound = std::min({p + 1, r + 1 - (mu - lambda),
                                      n_s - p + (s.cut(j + 1) - s.cut(j - 1))});
          if (u[mu - 1] - u[lambda - 1] > bound) {
            out.ok = false;
            out.violations.push_back({u, lambda, mu, bound});
          }
        }
  }
  return out;
}

HodgeTable hodge_numbers(const FlagType& s) {
  const int n_s = flag_dimension(s);
  const auto size = static_cast<std::size_t>(n_s) + 1;
  HodgeTable h(size, std::vector<boost::multiprecision::cpp_int>(size, 0));
  for (int p = 0; p <= n_s; ++p)
    for (const auto src = exterior_weights(s, p); const auto& [u, nu] : src.terms()) {
      const CohomologyResult c = bott_cohomology(u, s.rank());
      if (c.is_zero()) continue;
      h[p][c.degree] += nu * c.dimension;
    }
  return h;
}

}  // namespace kspos
