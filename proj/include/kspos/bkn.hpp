#pragma once

// Pointwise curvature commutator [i Theta, Lambda] on bundle-valued (p,q)-form
// coefficients in normal frames, the diagonal line-bundle spectrum, and the
// pointwise positivity checks built on them.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "kspos/curvature.hpp"
#include "kspos/error.hpp"

namespace kspos {

/// Basis (J, K, alpha) of E-valued (p,q)-form coefficients: J, K strictly
/// increasing subsets of {0..n-1} stored as bitmasks, ordered lexicographically
/// as index lists, alpha fastest.
class FormBasis {
 public:
  struct Element {
    unsigned J;
    unsigned K;
    int alpha;
  };

  FormBasis(int n, int p, int q, int r) : n_(n), p_(p), q_(q), r_(r) {
    if (n < 1 || n > 16) throw Error(Errc::invalid_rank, "form basis needs 1 <= n <= 16");
    if (r < 1) throw Error(Errc::invalid_rank, "form basis needs r >= 1");
    if (p < 0 || p > n || q < 0 || q > n) throw Error(Errc::invalid_input, "form degrees must lie in [0, n]");
    js_ = subsets(n, p);
    ks_ = subsets(n, q);
    rank_j_.assign(std::size_t{1} << n, -1);
    rank_k_.assign(std::size_t{1} << n, -1);
    for (std::size_t i = 0; i < js_.size(); ++i) rank_j_[js_[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < ks_.size(); ++i) rank_k_[ks_[i]] = static_cast<int>(i);
  }

  int n() const noexcept { return n_; }
  int p() const noexcept { return p_; }
  int q() const noexcept { return q_; }
  int r() const noexcept { return r_; }
  Eigen::Index size() const noexcept {
    return static_cast<Eigen::Index>(js_.size() * ks_.size()) * r_;
  }
  const std::vector<unsigned>& J_sets() const noexcept { return js_; }
  const std::vector<unsigned>& K_sets() const noexcept { return ks_; }

  Eigen::Index index(unsigned J, unsigned K, int alpha) const {
    const int a = rank_j_.at(J);
    const int b = rank_k_.at(K);
    if (a < 0 || b < 0) throw Error(Errc::invalid_input, "multi-index has the wrong degree");
    return (static_cast<Eigen::Index>(a) * static_cast<Eigen::Index>(ks_.size()) + b) * r_ + alpha;
  }

  Element element(Eigen::Index i) const {
    const auto per_j = static_cast<Eigen::Index>(ks_.size()) * r_;
    return {js_[static_cast<std::size_t>(i / per_j)], ks_[static_cast<std::size_t>((i % per_j) / r_)],
            static_cast<int>(i % r_)};
  }

  /// All size-`size` subsets of {0..n-1}, lexicographic as sorted index lists.
  static std::vector<unsigned> subsets(int n, int size) {
    std::vector<unsigned> out;
    if (size < 0 || size > n) return out;
    std::vector<int> pick(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      unsigned mask = 0;
      for (int x : pick) mask |= 1u << x;
      out.push_back(mask);
      int i = size - 1;
      while (i >= 0 && pick[i] == n - size + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
    return out;
  }

 private:
  int n_, p_, q_, r_;
  std::vector<unsigned> js_, ks_;
  std::vector<int> rank_j_, rank_k_;
};

/// Inserting index j into the increasing set S: the sign of the sorting
/// permutation of (j, S) is (-1)^{#{s in S : s < j}}. Returns 0 if j is in S.
inline int insertion_sign(int j, unsigned S) noexcept {
  if (S & (1u << j)) return 0;
  const unsigned below = S & ((1u << j) - 1u);
  return (std::popcount(below) % 2 == 0) ? 1 : -1;
}

template <class Scalar = std::complex<double>>
struct BKNOperator {
  FormBasis basis;
  MatrixX<Scalar> matrix;  // u^* M u is the curvature-commutator pairing
};

namespace detail {

/// sum over S (|S| = deg-1), j, k of R[a][b][j][k] u^a_{jS} conj(u^b_{kS}), added
/// into M on the slot selected by `slot(set, alpha)`.
template <class Scalar, class Slot>
void add_contraction(MatrixX<Scalar>& M, const CurvatureTensor<Scalar>& R, int deg, const Slot& slot) {
  if (deg < 1) return;
  const int n = R.base_dim();
  const int r = R.fibre_rank();
  for (unsigned S : FormBasis::subsets(n, deg - 1))
    for (int j = 0; j < n; ++j) {
      const int sj = insertion_sign(j, S);
      if (sj == 0) continue;
      const unsigned jS = S | (1u << j);
      for (int k = 0; k < n; ++k) {
        const int sk = insertion_sign(k, S);
        if (sk == 0) continue;
        const unsigned kS = S | (1u << k);
        for (int a = 0; a < r; ++a)
          for (int b = 0; b < r; ++b) {
            const Scalar v = R(a, b, j, k);
            if (v == Scalar(0)) continue;
            // Pairing term v * conj(u_row) * u_col with row = (kS, b) side.
            slot(M, kS, b, jS, a, Scalar(static_cast<double>(sj * sk)) * v);
          }
      }
    }
}

}  // namespace detail

/// The unique hermitian M with u^* M u equal to
///   sum R[a][b][j][k] u^a_{kR,K} conj(u^b_{jR,K})
/// + sum R[a][b][j][k] u^a_{J,jS} conj(u^b_{J,kS})
/// - sum R[a][b][j][j] u^a_{J,K} conj(u^b_{J,K}),
/// R running over (p-1)-sets and S over (q-1)-sets.
template <class Scalar>
BKNOperator<Scalar> bkn_matrix(const CurvatureTensor<Scalar>& R, int p, int q) {
  const int n = R.base_dim();
  const int r = R.fibre_rank();
  FormBasis basis(n, p, q, r);
  MatrixX<Scalar> M = MatrixX<Scalar>::Zero(basis.size(), basis.size());

  // First sum: holomorphic slot, coefficient index swapped (k R on u, j R on conj u).
  for (unsigned K : basis.K_sets())
    detail::add_contraction(M, R, p, [&](MatrixX<Scalar>& m, unsigned rowSet, int b, unsigned colSet, int a, Scalar v) {
      // add_contraction pairs u_{jS} with conj(u_{kS}); here u_{kR} pairs with conj(u_{jR}).
      // Row index goes with the conjugated coefficient.
      m(basis.index(colSet, K, b), basis.index(rowSet, K, a)) += v;
    });
  // Second sum: anti-holomorphic slot.
  for (unsigned J : basis.J_sets())
    detail::add_contraction(M, R, q, [&](MatrixX<Scalar>& m, unsigned rowSet, int b, unsigned colSet, int a, Scalar v) {
      m(basis.index(J, rowSet, b), basis.index(J, colSet, a)) += v;
    });
  // Third sum: trace over the base.
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) {
      Scalar tr(0);
      for (int j = 0; j < n; ++j) tr += R(a, b, j, j);
      if (tr == Scalar(0)) continue;
      for (unsigned J : basis.J_sets())
        for (unsigned K : basis.K_sets()) M(basis.index(J, K, b), basis.index(J, K, a)) -= tr;
    }
  return {std::move(basis), std::move(M)};
}

/// Top holomorphic degree only: the single sum over S, j, k with the first and
/// third sums dropped (they cancel when p = n).
template <class Scalar>
BKNOperator<Scalar> bkn_matrix_top_degree(const CurvatureTensor<Scalar>& R, int q) {
  const int n = R.base_dim();
  FormBasis basis(n, n, q, R.fibre_rank());
  MatrixX<Scalar> M = MatrixX<Scalar>::Zero(basis.size(), basis.size());
  const unsigned full = (1u << n) - 1u;
  detail::add_contraction(M, R, q, [&](MatrixX<Scalar>& m, unsigned rowSet, int b, unsigned colSet, int a, Scalar v) {
    m(basis.index(full, rowSet, b), basis.index(full, colSet, a)) += v;
  });
  return {std::move(basis), std::move(M)};
}

struct LineSpectrum {
  std::vector<double> eigenvalues;  // one per (J, K) in FormBasis order
  double lower_bound = 0;           // p smallest ratios + q smallest ratios - total
};

/// Diagonal line bundle: curvature ratios nu_j / mu_j; eigenvalue of (J, K) is
/// sum_{J} + sum_{K} - sum_{all}.
inline LineSpectrum bkn_line_eigenvalues(const std::vector<double>& nu, const std::vector<double>& mu, int p, int q) {
  const int n = static_cast<int>(nu.size());
  if (n < 1 || mu.size() != nu.size()) throw Error(Errc::dimension_mismatch, "nu and mu must have equal length >= 1");
  if (p < 0 || p > n || q < 0 || q > n) throw Error(Errc::invalid_input, "form degrees must lie in [0, n]");
  std::vector<double> ratio(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    if (!(mu[j] > 0)) throw Error(Errc::invalid_input, "metric eigenvalues mu must be positive");
    ratio[j] = nu[j] / mu[j];
  }
  double total = 0;
  for (double x : ratio) total += x;
  auto sum_over = [&](unsigned S) {
    double acc = 0;
    for (int j = 0; j < n; ++j)
      if (S & (1u << j)) acc += ratio[j];
    return acc;
  };
  LineSpectrum out;
  for (unsigned J : FormBasis::subsets(n, p))
    for (unsigned K : FormBasis::subsets(n, q)) out.eigenvalues.push_back(sum_over(J) + sum_over(K) - total);
  std::vector<double> sorted = ratio;
  std::sort(sorted.begin(), sorted.end());
  for (int j = 0; j < p; ++j) out.lower_bound += sorted[j];
  for (int j = 0; j < q; ++j) out.lower_bound += sorted[j];
  out.lower_bound -= total;
  return out;
}

/// Builds the diagonal rank-one tensor R[0][0][j][j] = nu_j / mu_j (coordinates
/// rescaled by sqrt(mu_j) to reach a normal frame) and returns the largest
/// deviation between the sorted spectra of bkn_matrix and bkn_line_eigenvalues.
inline double crosscheck_line(const std::vector<double>& nu, const std::vector<double>& mu, int p, int q) {
  const LineSpectrum expected = bkn_line_eigenvalues(nu, mu, p, q);
  const int n = static_cast<int>(nu.size());
  MatrixX<std::complex<double>> c = MatrixX<std::complex<double>>::Zero(n, n);
  for (int j = 0; j < n; ++j) c(j, j) = nu[j] / mu[j];
  const auto op = bkn_matrix(line_curvature(c), p, q);
  Eigen::SelfAdjointEigenSolver<MatrixX<std::complex<double>>> es(op.matrix, Eigen::EigenvaluesOnly);
  std::vector<double> got(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::vector<double> want = expected.eigenvalues;
  std::sort(want.begin(), want.end());
  if (got.size() != want.size()) return INFINITY;
  double dev = 0;
  for (std::size_t i = 0; i < got.size(); ++i) dev = std::max(dev, std::abs(got[i] - want[i]));
  return dev;
}

template <class Scalar>
typename Eigen::NumTraits<Scalar>::Real min_eigenvalue(const MatrixX<Scalar>& M) {
  if (M.rows() == 0) return 0;
  return Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>>(M, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

/// Operator on (n, q)-forms under a Nakano hypothesis (checked exactly first).
/// Refuted only when the hypothesis holds and an eigenvalue <= tol appears.
template <class Scalar>
PositivityReport<Scalar> check_nakano_pointwise(const CurvatureTensor<Scalar>& R, int q, double tol = 1e-9) {
  const int n = R.base_dim();
  if (q < 1 || q > n) throw Error(Errc::invalid_input, "check_nakano_pointwise needs 1 <= q <= n");
  const auto hyp = check_nakano(R, tol);
  PositivityReport<Scalar> rep;
  rep.claim = "bkn_positive_on_(n,q)_forms";
  rep.s = q;
  rep.tolerance = hyp.tolerance;
  rep.rng = "none";
  rep.hypothesis = "nakano_positive";
  rep.hypothesis_met = !hyp.refuted();
  const auto op = bkn_matrix(R, n, q);
  const auto p = detail::probe(HermitianForm<Scalar>{op.matrix}, rep.tolerance);
  rep.samples_run = 1;
  rep.margin = rep.worst_min_eigenvalue = p.min_eigenvalue;
  rep.worst_kernel_dim = p.kernel_dim;
  rep.witness = Witness<Scalar>{Side::base_vectors, MatrixX<Scalar>(), p.lowest, p.min_eigenvalue, p.kernel_dim};
  rep.verdict = (*rep.hypothesis_met && p.min_eigenvalue <= rep.tolerance) ? Verdict::refuted : Verdict::not_refuted;
  return rep;
}

/// Operator on (n, q)-forms for a (k, s)-positive tensor, s = min{n-q+1, r};
/// the hypothesis is re-checked with the sampling falsifier.
template <class Scalar>
PositivityReport<Scalar> check_top_degree_ks_pointwise(const CurvatureTensor<Scalar>& R, int k, int q,
                                                       const KsOptions& opt = {}) {
  const int n = R.base_dim();
  if (q <= k) throw Error(Errc::precondition, "the top-degree (k,s) check needs q > k");
  if (q < 1 || q > n) throw Error(Errc::invalid_input, "q must lie in [1, n]");
  const int s = std::min(n - q + 1, R.fibre_rank());
  const auto hyp = check_ks_positive(R, k, s, opt);
  PositivityReport<Scalar> rep;
  rep.claim = "bkn_positive_on_(n,q)_forms";
  rep.k = k;
  rep.s = s;
  rep.seed = opt.seed;
  rep.tolerance = hyp.tolerance;
  rep.hypothesis = "ks_positive(k, min(n-q+1, r))";
  rep.hypothesis_met = !hyp.refuted();
  const auto op = bkn_matrix(R, n, q);
  const auto p = detail::probe(HermitianForm<Scalar>{op.matrix}, rep.tolerance);
  rep.samples_run = hyp.samples_run;
  rep.refinement_steps = hyp.refinement_steps;
  rep.margin = rep.worst_min_eigenvalue = p.min_eigenvalue;
  rep.worst_kernel_dim = p.kernel_dim;
  rep.witness = Witness<Scalar>{Side::base_vectors, MatrixX<Scalar>(), p.lowest, p.min_eigenvalue, p.kernel_dim};
  rep.verdict = (*rep.hypothesis_met && p.min_eigenvalue <= rep.tolerance) ? Verdict::refuted : Verdict::not_refuted;
  return rep;
}

}  // namespace kspos
