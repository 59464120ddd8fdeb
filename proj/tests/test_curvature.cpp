#include <doctest.h>

#include <random>

#include "kspos/curvature.hpp"
#include "kspos/error.hpp"

using namespace kspos;
using C = std::complex<double>;
using Mat = MatrixX<C>;

namespace {

Mat random_matrix(std::mt19937_64& gen, int rows, int cols) {
  std::normal_distribution<double> g;
  Mat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = C(g(gen), g(gen));
  return m;
}

Mat unit(int dim, int i) {
  Mat v = Mat::Zero(dim, 1);
  v(i, 0) = 1;
  return v;
}

int kernel_dim(const HermitianForm<C>& f, double tol = 1e-9) {
  return static_cast<int>((f.eigenvalues().array() < tol).count());
}

/// sum_{i,j} |sum_r xi^{ir} conj(v^{jr})|^2 + sum_{r,s} |sum_i xi^{ir} conj(v^{is})|^2
double grassmannian_closed_form(const Mat& xi, const Mat& v) {
  return (xi * v.adjoint()).squaredNorm() + (xi.transpose() * v.conjugate()).squaredNorm();
}

/// Flattens a d x (n-d) matrix with index (i, rho) -> i*(n-d)+rho.
Mat flatten(const Mat& m) {
  Mat out(m.rows() * m.cols(), 1);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index r = 0; r < m.cols(); ++r) out(i * m.cols() + r, 0) = m(i, r);
  return out;
}

}  // namespace

TEST_CASE("Grassmannian curvature") {
  const Tensor g21 = grassmannian_curvature(2, 1);
  CHECK(g21.base_dim() == 1);
  CHECK(g21(0, 0, 0, 0) == C(2));
  const Tensor g42 = grassmannian_curvature(4, 2);
  CHECK(g42.base_dim() == 4);
  CHECK(g42.fibre_rank() == 4);
  CHECK(g42.is_hermitian());
  const Mat e11 = unit(4, 0);
  CHECK(eval_form(g42, e11, e11) == doctest::Approx(2.0));
  CHECK_THROWS_AS(grassmannian_curvature(4, 0), Error);
  CHECK_THROWS_AS(grassmannian_curvature(4, 4), Error);

  std::mt19937_64 gen(7);
  for (auto [n, d] : {std::pair{3, 1}, {4, 2}, {5, 2}, {5, 3}, {6, 2}}) {
    const Tensor R = grassmannian_curvature(n, d);
    CHECK(R.is_hermitian());
    for (int t = 0; t < 20; ++t) {
      const Mat xi = random_matrix(gen, d, n - d);
      const Mat v = random_matrix(gen, d, n - d);
      const double want = grassmannian_closed_form(xi, v);
      const C got = eval_form_complex(R, flatten(xi), flatten(v));
      CHECK(std::abs(got.real() - want) <= 1e-10 * std::max(1.0, want));
      CHECK(std::abs(got.imag()) <= 1e-10 * std::max(1.0, want));
    }
  }
}

TEST_CASE("form evaluation") {
  std::mt19937_64 gen(11);
  const Tensor R = sample_nakano_positive(3, 2, 5);
  CHECK(eval_form(R, Mat(Mat::Zero(3, 1)), Mat(Mat::Zero(2, 1))) == 0.0);
  for (int t = 0; t < 20; ++t) {
    const Mat xi = random_matrix(gen, 3, 2);
    const Mat v = random_matrix(gen, 2, 2);
    const C val = eval_form_complex(R, xi, v);
    CHECK(val.real() > 0);
    CHECK(std::abs(val.imag()) <= 1e-10 * std::abs(val));
  }
  CHECK_THROWS_AS(eval_form(R, Mat(Mat::Zero(2, 1)), Mat(Mat::Zero(2, 1))), Error);
}

TEST_CASE("restricted forms") {
  const Tensor g42 = grassmannian_curvature(4, 2);
  const HermitianForm<C> f = restricted_form(g42, unit(4, 0), Side::fibre_vectors);
  CHECK(f.dim() == 4);
  CHECK(f.eigenvalues()(0) >= -1e-12);
  CHECK(kernel_dim(f) == 1);
  // kernel spanned by the (2,2) matrix unit
  const Mat e22 = unit(4, 3);
  CHECK((f.matrix * e22).norm() < 1e-12);

  const HermitianForm<C> scaled = restricted_form(g42, Mat(C(0, 3) * unit(4, 0)), Side::fibre_vectors);
  CHECK((scaled.matrix - 9.0 * f.matrix).norm() < 1e-12);

  const Tensor id = identity_curvature(3, 2);
  const HermitianForm<C> two = restricted_form(id, Mat(Mat::Identity(2, 2)), Side::fibre_vectors);
  CHECK((two.matrix - Mat::Identity(6, 6)).norm() < 1e-12);

  Mat dependent(2, 2);
  dependent << 1, 2, 2, 4;
  CHECK_THROWS_AS(restricted_form(id, dependent, Side::fibre_vectors), Error);
  try {
    restricted_form(id, dependent, Side::fibre_vectors);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::degenerate_tuple);
  }
  CHECK_THROWS_AS(restricted_form(id, unit(3, 0), Side::fibre_vectors), Error);
}

TEST_CASE("restricted spectrum is invariant under rotating the tuple") {
  std::mt19937_64 gen(3);
  const Tensor R = sample_griffiths_k(3, 3, 1, 17);
  for (int t = 0; t < 10; ++t) {
    const Mat v = random_matrix(gen, 3, 2);
    const Mat U = Eigen::HouseholderQR<Mat>(random_matrix(gen, 2, 2)).householderQ();
    for (Side side : {Side::fibre_vectors, Side::base_vectors}) {
      const auto a = restricted_form(R, v, side).eigenvalues();
      const auto b = restricted_form(R, Mat(v * U), side).eigenvalues();
      CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("(k,s) falsifier on the Grassmannian") {
  KsOptions opt;
  opt.samples = 500;
  for (auto [n, d] : {std::pair{4, 2}, {5, 2}, {5, 3}}) {
    const Tensor R = grassmannian_curvature(n, d);
    const int k = (d - 1) * (n - d - 1);
    const auto ok = check_ks_positive(R, k, 1, opt);
    CHECK(ok.verdict == Verdict::not_refuted);
    CHECK(ok.worst_min_eigenvalue >= -1e-9);
    const auto bad = check_ks_positive(R, k - 1, 1, opt);
    CHECK(bad.refuted());
    REQUIRE(bad.witness);
    // the witness reproduces the violation
    const auto again = restricted_form(R, bad.witness->tuple, bad.witness->side);
    CHECK(kernel_dim(again) > k - 1);
  }
  const auto zero_k = check_ks_positive(grassmannian_curvature(4, 2), 0, 1, opt);
  CHECK(zero_k.refuted());
  CHECK(zero_k.seed == 0);
  CHECK(zero_k.tolerance == 1e-9);
  CHECK(zero_k.rng == kRngName);
}

TEST_CASE("(k,s) falsifier edge cases") {
  const Tensor zero(2, 2);
  for (int s = 1; s <= 2; ++s) CHECK_FALSE(check_ks_positive(zero, 2 * s, s).refuted());
  CHECK(check_ks_positive(zero, 1, 2).refuted());
  CHECK_THROWS_AS(check_ks_positive(zero, 0, 0), Error);
  CHECK_THROWS_AS(check_ks_positive(zero, 0, 3), Error);
  KsOptions none;
  none.samples = 0;
  CHECK_THROWS_AS(check_ks_positive(zero, 0, 1, none), Error);
}

TEST_CASE("(k,s) verdicts are monotone on identical seeds") {
  KsOptions opt;
  opt.samples = 60;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    opt.seed = seed;
    const Tensor R = seed % 2 ? sample_griffiths_k(3, 2, 1, seed) : grassmannian_curvature(4, 2);
    const int cap = std::max(R.base_dim(), R.fibre_rank());
    for (int k = 0; k <= 3; ++k)
      for (int s = 1; s <= cap; ++s) {
        const bool refuted = check_ks_positive(R, k, s, opt).refuted();
        if (check_ks_positive(R, k + 1, s, opt).refuted()) CHECK(refuted);
        if (s > 1 && check_ks_positive(R, k, s - 1, opt).refuted()) CHECK(refuted);
      }
  }
}

TEST_CASE("exact Nakano check") {
  const auto id = check_nakano(identity_curvature(3, 2));
  CHECK_FALSE(id.refuted());
  CHECK(id.worst_min_eigenvalue == doctest::Approx(1.0));
  // n = 2 is O(1) on P^1, strictly positive
  CHECK_FALSE(check_nakano(grassmannian_curvature(2, 1)).refuted());
  for (int n = 3; n <= 5; ++n) {
    const auto proj = check_nakano(grassmannian_curvature(n, 1));
    CHECK(proj.refuted());
    CHECK(std::abs(proj.worst_min_eigenvalue) < 1e-12);
  }
  const auto neg = check_nakano(dual_curvature(identity_curvature(2, 2)));
  CHECK(neg.refuted());
  CHECK(neg.worst_min_eigenvalue == doctest::Approx(-1.0));
}

TEST_CASE("curvature algebra") {
  std::mt19937_64 gen(5);
  const Tensor R = sample_griffiths_k(3, 2, 1, 9);
  const Tensor F = sample_nakano_positive(3, 3, 4);
  CHECK(dual_curvature(dual_curvature(R)) == R);
  CHECK((det_curvature(dual_curvature(R)) + det_curvature(R)).norm() < 1e-14);
  CHECK(twist_det(R, 0) == R);
  CHECK(dual_twist(R, 0) == dual_curvature(R));
  CHECK((det_curvature(identity_curvature(4, 3)) - 3.0 * Mat::Identity(4, 4)).norm() == 0);
  for (int n = 2; n <= 5; ++n)
    CHECK((det_curvature(grassmannian_curvature(n, 1)) - double(n) * Mat::Identity(n - 1, n - 1)).norm() < 1e-14);

  const Tensor trivial(3, 1);
  const Tensor Rt = tensor_curvature(R, trivial);
  CHECK(Rt.nakano_matrix() == R.nakano_matrix());
  const Mat trace = det_curvature(tensor_curvature(R, F));
  CHECK((trace - (3.0 * det_curvature(R) + 2.0 * det_curvature(F))).norm() < 1e-12);
  const auto doubled = check_nakano(tensor_curvature(identity_curvature(2, 2), identity_curvature(2, 2)));
  CHECK(doubled.worst_min_eigenvalue == doctest::Approx(2.0));

  const Tensor tw = twist_det(identity_curvature(3, 2), 1);
  CHECK((tw.nakano_matrix() - 3.0 * Mat::Identity(6, 6)).norm() < 1e-14);
  const Tensor dt = dual_twist(identity_curvature(3, 4), 1);
  CHECK(check_nakano(dt).worst_min_eigenvalue == doctest::Approx(3.0));

  for (const Tensor& T : {R, F, tw, dt, Rt}) {
    CHECK(T.is_hermitian(1e-13));
    CHECK(dual_curvature(T).is_hermitian(1e-13));
    CHECK(twist_det(T, 2).is_hermitian(1e-13));
    CHECK(dual_twist(T, 1).is_hermitian(1e-13));
    CHECK((twist_det(2.5 * T, 1).nakano_matrix() - 2.5 * twist_det(T, 1).nakano_matrix()).norm() < 1e-12);
    CHECK((dual_twist(2.5 * T, 2).nakano_matrix() - 2.5 * dual_twist(T, 2).nakano_matrix()).norm() < 1e-12);
  }
  CHECK_THROWS_AS(tensor_curvature(R, Tensor(2, 1)), Error);
}

TEST_CASE("pullback") {
  std::mt19937_64 gen(13);
  const Tensor R = sample_nakano_positive(3, 2, 21);
  CHECK((pullback_curvature(R, Mat(Mat::Identity(3, 3))).nakano_matrix() - R.nakano_matrix()).norm() < 1e-14);
  CHECK(pullback_curvature(R, Mat(Mat::Zero(3, 2))).nakano_matrix().norm() == 0);
  CHECK_THROWS_AS(pullback_curvature(R, Mat(Mat::Identity(2, 2))), Error);
  Mat stacked = Mat::Zero(3, 4);
  stacked.leftCols(3) = Mat::Identity(3, 3);
  for (int extra = 1; extra <= 2; ++extra) {
    const Mat jac = random_matrix(gen, 3, 3 + extra);
    const Tensor P = pullback_curvature(R, jac);
    for (int t = 0; t < 10; ++t) {
      const Mat v = random_matrix(gen, 2, 1);
      CHECK(kernel_dim(restricted_form(R, v, Side::fibre_vectors)) == 0);
      CHECK(kernel_dim(restricted_form(P, v, Side::fibre_vectors)) == extra);
    }
  }
  const Tensor Ps = pullback_curvature(R, stacked);
  CHECK(kernel_dim(restricted_form(Ps, unit(2, 0), Side::fibre_vectors)) == 1);
}

TEST_CASE("generators") {
  for (int n = 1; n <= 4; ++n)
    for (int r = 1; r <= 3; ++r)
      for (int k = 0; k < n; ++k) {
        const Tensor R = sample_griffiths_k(n, r, k, static_cast<std::uint64_t>(100 * n + 10 * r + k));
        CHECK(R.is_hermitian());
        CHECK(R == sample_griffiths_k(n, r, k, static_cast<std::uint64_t>(100 * n + 10 * r + k)));
        CHECK_FALSE(check_ks_positive(R, k, 1).refuted());
        // the last k base directions are in every fibre-side kernel
        const HermitianForm<C> f = restricted_form(R, unit(r, 0), Side::fibre_vectors);
        for (int j = n - k; j < n; ++j) CHECK((f.matrix * unit(n, j)).norm() < 1e-12);
      }
  CHECK_THROWS_AS(sample_griffiths_k(3, 2, 3, 0), Error);
  CHECK_THROWS_AS(sample_griffiths_k(3, 2, -1, 0), Error);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Tensor R = sample_nakano_positive(3, 3, seed);
    CHECK(R.is_hermitian());
    CHECK_FALSE(check_nakano(R).refuted());
  }
}

TEST_CASE("tensors must be hermitian") {
  Mat h = Mat::Zero(2, 2);
  h(0, 1) = C(1, 1);
  CHECK_THROWS_AS(Tensor::from_nakano_matrix(2, 1, h), Error);
  CHECK_THROWS_AS(Tensor::from_nakano_matrix(3, 1, h), Error);
  CHECK_THROWS_AS(Tensor(0, 1), Error);
}
