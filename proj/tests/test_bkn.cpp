#include <doctest.h>

#include <random>

#include "kspos/bkn.hpp"
#include "kspos/error.hpp"
#include "oracles.hpp"

using namespace kspos;
using C = std::complex<double>;
using Mat = MatrixX<C>;
using Vec = VectorX<C>;

namespace {

struct Coefficients {
  const FormBasis& basis;
  const Vec& u;
  /// u^a_{I,L} for arbitrary index lists, antisymmetric in each.
  C operator()(std::vector<int> I, std::vector<int> L, int a) const {
    const int si = oracle::sort_sign(I);
    const int sl = oracle::sort_sign(L);
    if (si == 0 || sl == 0) return 0;
    std::sort(I.begin(), I.end());
    std::sort(L.begin(), L.end());
    unsigned mi = 0, ml = 0;
    for (int x : I) mi |= 1u << x;
    for (int x : L) ml |= 1u << x;
    return double(si * sl) * u(basis.index(mi, ml, a));
  }
};

std::vector<int> prepend(int j, const std::vector<int>& rest) {
  std::vector<int> out{j};
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

/// The three-sum pairing, evaluated term by term over increasing index lists.
C pairing(const Tensor& R, const FormBasis& basis, const Vec& u) {
  const int n = R.base_dim(), r = R.fibre_rank(), p = basis.p(), q = basis.q();
  const Coefficients c{basis, u};
  C total = 0;
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const C v = R(a, b, j, k);
          if (p >= 1)
            for (const auto& S : oracle::increasing(n, p - 1))
              for (const auto& K : oracle::increasing(n, q))
                total += v * c(prepend(k, S), K, a) * std::conj(c(prepend(j, S), K, b));
          if (q >= 1)
            for (const auto& J : oracle::increasing(n, p))
              for (const auto& S : oracle::increasing(n, q - 1))
                total += v * c(J, prepend(j, S), a) * std::conj(c(J, prepend(k, S), b));
          if (j == k)
            for (const auto& J : oracle::increasing(n, p))
              for (const auto& K : oracle::increasing(n, q)) total -= v * c(J, K, a) * std::conj(c(J, K, b));
        }
  return total;
}

Vec random_vector(std::mt19937_64& gen, Eigen::Index size) {
  std::normal_distribution<double> g;
  Vec v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = C(g(gen), g(gen));
  return v;
}

}  // namespace

TEST_CASE("form basis") {
  const FormBasis b(4, 2, 1, 3);
  CHECK(b.size() == 6 * 4 * 3);
  CHECK(FormBasis::subsets(4, 2) == std::vector<unsigned>{0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100});
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    const auto e = b.element(i);
    CHECK(b.index(e.J, e.K, e.alpha) == i);
  }
  CHECK(insertion_sign(2, 0b0011) == 1);
  CHECK(insertion_sign(1, 0b0101) == -1);
  CHECK(insertion_sign(0, 0b0001) == 0);
  CHECK_THROWS_AS(FormBasis(3, 4, 0, 1), Error);
}

TEST_CASE("operator matches the three-sum pairing") {
  std::mt19937_64 gen(1);
  for (int n = 1; n <= 3; ++n)
    for (int r = 1; r <= 2; ++r) {
      const Tensor R = sample_griffiths_k(n, r, 0, static_cast<std::uint64_t>(n * 10 + r)) +
                       (-0.7) * sample_nakano_positive(n, r, static_cast<std::uint64_t>(n + r));
      for (int p = 0; p <= n; ++p)
        for (int q = 0; q <= n; ++q) {
          const auto op = bkn_matrix(R, p, q);
          CHECK((op.matrix - op.matrix.adjoint()).norm() <= 1e-12 * std::max(1.0, op.matrix.norm()));
          for (int t = 0; t < 3; ++t) {
            const Vec u = random_vector(gen, op.basis.size());
            const C want = pairing(R, op.basis, u);
            const C got = u.dot(op.matrix * u);  // u^* M u
            CHECK(std::abs(got - want) <= 1e-10 * std::max(1.0, std::abs(want)));
          }
        }
    }
}

TEST_CASE("top holomorphic degree reduces to a single sum") {
  for (int n = 1; n <= 4; ++n)
    for (int r = 1; r <= 3; ++r) {
      const Tensor R = sample_nakano_positive(n, r, static_cast<std::uint64_t>(7 * n + r));
      for (int q = 0; q <= n; ++q)
        CHECK((bkn_matrix(R, n, q).matrix - bkn_matrix_top_degree(R, q).matrix).norm() < 1e-12);
    }
}

TEST_CASE("worked values") {
  for (int n = 1; n <= 4; ++n) {
    const auto top = bkn_matrix(identity_curvature(n, 1), n, n);
    REQUIRE(top.matrix.rows() == 1);
    CHECK(top.matrix(0, 0).real() == doctest::Approx(double(n)));
  }
  const Tensor R = sample_nakano_positive(3, 2, 1);
  const Mat m00 = bkn_matrix(R, 0, 0).matrix;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      C tr = 0;
      for (int j = 0; j < 3; ++j) tr += R(b, a, j, j);
      CHECK(std::abs(m00(a, b) + tr) < 1e-12);
    }
  CHECK_THROWS_AS(bkn_matrix(R, 4, 0), Error);
}

TEST_CASE("spectrum is symmetric under swapping form degrees and transposing the fibre") {
  for (int n = 2; n <= 3; ++n) {
    const Tensor R = sample_griffiths_k(n, 2, 1, static_cast<std::uint64_t>(n));
    const Tensor T = fibre_transpose(R);
    for (int p = 0; p <= n; ++p)
      for (int q = 0; q <= n; ++q) {
        const auto a = Eigen::SelfAdjointEigenSolver<Mat>(bkn_matrix(R, p, q).matrix).eigenvalues();
        const auto b = Eigen::SelfAdjointEigenSolver<Mat>(bkn_matrix(T, q, p).matrix).eigenvalues();
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
      }
  }
}

TEST_CASE("diagonal line bundles") {
  const LineSpectrum s = bkn_line_eigenvalues({0, 1}, {1, 1}, 1, 1);
  std::vector<double> ev = s.eigenvalues;
  std::sort(ev.begin(), ev.end());
  CHECK(ev == std::vector<double>{-1, 0, 0, 1});
  for (int n = 1; n <= 4; ++n)
    for (int p = 0; p <= n; ++p)
      for (int q = 0; q <= n; ++q) {
        const std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
        const LineSpectrum flat = bkn_line_eigenvalues(ones, ones, p, q);
        for (double x : flat.eigenvalues) CHECK(x == doctest::Approx(double(p + q - n)));
      }
  const LineSpectrum full = bkn_line_eigenvalues({0.5, -2, 3}, {1, 2, 0.5}, 3, 3);
  REQUIRE(full.eigenvalues.size() == 1);
  CHECK(full.eigenvalues[0] == doctest::Approx(0.5 - 1 + 6));
  CHECK_THROWS_AS(bkn_line_eigenvalues({1}, {0}, 1, 1), Error);
  CHECK_THROWS_AS(bkn_line_eigenvalues({1, 2}, {1}, 1, 1), Error);

  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> nu(-2, 2), mu(0.2, 3);
  for (int n = 1; n <= 4; ++n)
    for (int t = 0; t < 20; ++t) {
      std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) {
        a[j] = nu(gen);
        b[j] = mu(gen);
      }
      for (int p = 0; p <= n; ++p)
        for (int q = 0; q <= n; ++q) {
          CHECK(crosscheck_line(a, b, p, q) <= 1e-10);
          const LineSpectrum ls = bkn_line_eigenvalues(a, b, p, q);
          for (double x : ls.eigenvalues) CHECK(x >= ls.lower_bound - 1e-12);
        }
    }
  CHECK(crosscheck_line({0, 0, 0}, {1, 1, 1}, 1, 2) == 0.0);
}

TEST_CASE("pointwise Nakano check") {
  const auto id = check_nakano_pointwise(identity_curvature(2, 2), 1);
  CHECK_FALSE(id.refuted());
  CHECK(*id.hypothesis_met);
  CHECK(id.margin == doctest::Approx(1.0));
  for (int n = 3; n <= 4; ++n) {
    const auto proj = check_nakano_pointwise(grassmannian_curvature(n, 1), 1);
    CHECK_FALSE(*proj.hypothesis_met);
    CHECK(proj.margin >= -1e-12);
  }
  const auto neg = check_nakano_pointwise(dual_curvature(identity_curvature(2, 2)), 1);
  CHECK_FALSE(*neg.hypothesis_met);
  CHECK_FALSE(neg.refuted());
  CHECK_THROWS_AS(check_nakano_pointwise(identity_curvature(2, 2), 0), Error);
}

TEST_CASE("pointwise top-degree (k,s) check") {
  const auto line = check_top_degree_ks_pointwise(sample_griffiths_k(3, 1, 1, 4), 1, 2);
  CHECK(*line.hypothesis_met);
  CHECK(line.margin > 0);
  CHECK_FALSE(line.refuted());
  for (int q = 1; q <= 3; ++q) {
    const auto id = check_top_degree_ks_pointwise(identity_curvature(3, 2), 0, q);
    CHECK(id.margin > 0);
    CHECK_FALSE(id.refuted());
  }
  try {
    check_top_degree_ks_pointwise(identity_curvature(3, 2), 1, 1);
    FAIL("expected a precondition error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::precondition);
  }
}
