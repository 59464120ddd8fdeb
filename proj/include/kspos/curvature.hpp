#pragma once

// Pointwise curvature tensors of hermitian bundles in normal frames, the
// restricted hermitian forms that define (k,s)-positivity, and the usual
// curvature algebra (dual, tensor product, determinant twists, pullback).
//
// Storage: a tensor R[alpha][beta][j][k] (fibre pair, base pair) is held as the
// (r*n) x (r*n) "Nakano matrix" H(alpha*n + j, beta*n + k). Hermitian symmetry
// R[a][b][j][k] = conj R[b][a][k][j] is exactly H == H^*.

#include <algorithm>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kspos/counter_rng.hpp"
#include "kspos/error.hpp"

namespace kspos {

template <class Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar = std::complex<double>>
class CurvatureTensor {
 public:
  using RealScalar = typename Eigen::NumTraits<Scalar>::Real;
  using Matrix = MatrixX<Scalar>;

  CurvatureTensor(int n, int r) : n_(n), r_(r) {
    if (n < 1 || r < 1) throw Error(Errc::invalid_rank, "curvature tensor needs n >= 1 and r >= 1");
    h_ = Matrix::Zero(static_cast<Eigen::Index>(n) * r, static_cast<Eigen::Index>(n) * r);
  }

  /// Throws unless `h` is hermitian to `tol` (default: exactly).
  static CurvatureTensor from_nakano_matrix(int n, int r, Matrix h, RealScalar tol = 0) {
    CurvatureTensor t(n, r);
    if (h.rows() != t.h_.rows() || h.cols() != t.h_.cols())
      throw Error(Errc::dimension_mismatch, "Nakano matrix must be (n*r) x (n*r)");
    t.h_ = std::move(h);
    if (!t.is_hermitian(tol)) throw Error(Errc::invalid_input, "curvature tensor is not hermitian");
    return t;
  }

  int base_dim() const noexcept { return n_; }
  int fibre_rank() const noexcept { return r_; }

  Scalar operator()(int alpha, int beta, int j, int k) const {
    return h_(index(alpha, j), index(beta, k));
  }
  /// Raw entry access; the caller keeps the hermitian partner in sync.
  Scalar& coeff(int alpha, int beta, int j, int k) { return h_(index(alpha, j), index(beta, k)); }

  const Matrix& nakano_matrix() const noexcept { return h_; }
  Matrix& nakano_matrix() noexcept { return h_; }

  /// Block (alpha, beta) as an n x n matrix over base indices (j, k).
  auto block(int alpha, int beta) const {
    return h_.block(static_cast<Eigen::Index>(alpha) * n_, static_cast<Eigen::Index>(beta) * n_, n_, n_);
  }
  auto block(int alpha, int beta) {
    return h_.block(static_cast<Eigen::Index>(alpha) * n_, static_cast<Eigen::Index>(beta) * n_, n_, n_);
  }

  bool is_hermitian(RealScalar tol = 0) const {
    for (Eigen::Index i = 0; i < h_.rows(); ++i)
      for (Eigen::Index j = i; j < h_.cols(); ++j)
        if (std::abs(h_(i, j) - Eigen::numext::conj(h_(j, i))) > tol) return false;
    return true;
  }

  friend CurvatureTensor operator*(RealScalar c, CurvatureTensor t) {
    t.h_ *= Scalar(c);
    return t;
  }
  friend CurvatureTensor operator+(CurvatureTensor a, const CurvatureTensor& b) {
    if (a.n_ != b.n_ || a.r_ != b.r_) throw Error(Errc::dimension_mismatch, "tensor shapes differ");
    a.h_ += b.h_;
    return a;
  }
  friend bool operator==(const CurvatureTensor& a, const CurvatureTensor& b) {
    return a.n_ == b.n_ && a.r_ == b.r_ && a.h_ == b.h_;
  }

 private:
  Eigen::Index index(int alpha, int j) const {
    if (alpha < 0 || alpha >= r_ || j < 0 || j >= n_)
      throw Error(Errc::dimension_mismatch, "curvature index out of range");
    return static_cast<Eigen::Index>(alpha) * n_ + j;
  }

  int n_;
  int r_;
  Matrix h_;
};

using Tensor = CurvatureTensor<>;

enum class Side { fibre_vectors, base_vectors };

inline const char* to_string(Side s) noexcept {
  return s == Side::fibre_vectors ? "fiber_vectors" : "base_vectors";
}

template <class Scalar = std::complex<double>>
struct HermitianForm {
  using RealScalar = typename Eigen::NumTraits<Scalar>::Real;

  MatrixX<Scalar> matrix;

  Eigen::Index dim() const noexcept { return matrix.rows(); }
  /// Ascending.
  VectorX<RealScalar> eigenvalues() const {
    return Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>>(matrix, Eigen::EigenvaluesOnly).eigenvalues();
  }
};

enum class Verdict { refuted, not_refuted };

inline const char* to_string(Verdict v) noexcept {
  return v == Verdict::refuted ? "refuted" : "not_refuted";
}

template <class Scalar = std::complex<double>>
struct Witness {
  using RealScalar = typename Eigen::NumTraits<Scalar>::Real;
  Side side = Side::fibre_vectors;
  MatrixX<Scalar> tuple;         // columns are the tuple vectors; empty for whole-space checks
  VectorX<Scalar> eigenvector;   // of the restricted form, for the lowest eigenvalue
  RealScalar min_eigenvalue = 0;
  int kernel_dim = 0;
};

template <class Scalar = std::complex<double>>
struct PositivityReport {
  using RealScalar = typename Eigen::NumTraits<Scalar>::Real;

  std::string claim;
  int k = 0;
  int s = 0;
  Verdict verdict = Verdict::not_refuted;
  long samples_run = 0;
  long refinement_steps = 0;
  RealScalar worst_min_eigenvalue = 0;
  int worst_kernel_dim = 0;
  std::optional<Witness<Scalar>> witness;
  std::uint64_t seed = 0;
  RealScalar tolerance = 0;
  std::string rng = kRngName;
  // Set by checks that are conditional on a hypothesis about the tensor.
  std::optional<bool> hypothesis_met;
  std::string hypothesis;
  RealScalar margin = 0;  // lowest eigenvalue of the operator under test, where meaningful

  bool refuted() const noexcept { return verdict == Verdict::refuted; }
};

// ---------------------------------------------------------------------------
// Built-in tensors

/// R[a][b][j][k] = delta_ab delta_jk.
template <class Scalar = std::complex<double>>
CurvatureTensor<Scalar> identity_curvature(int n, int r) {
  CurvatureTensor<Scalar> t(n, r);
  t.nakano_matrix().setIdentity();
  return t;
}

/// Curvature of the tautological quotient on G(n, d) at a point: base and fibre
/// are both Hom-type spaces of dimension d(n-d), indexed (i, rho) -> i*(n-d)+rho.
template <class Scalar = std::complex<double>>
CurvatureTensor<Scalar> grassmannian_curvature(int n, int d) {
  if (d < 1 || d > n - 1) throw Error(Errc::invalid_input, "grassmannian needs 1 <= d <= n-1");
  const int m = n - d;
  const int dim = d * m;
  auto idx = [m](int i, int rho) { return i * m + rho; };
  CurvatureTensor<Scalar> t(dim, dim);
  // base j = (i, rho), base-bar k = (jp, sigma), fibre alpha = (kp, tau), beta = (l, ups)
  for (int i = 0; i < d; ++i)
    for (int rho = 0; rho < m; ++rho)
      for (int jp = 0; jp < d; ++jp)
        for (int sigma = 0; sigma < m; ++sigma) {
          // first term: i = jp, kp = l, rho = ups, sigma = tau
          if (i == jp)
            for (int kp = 0; kp < d; ++kp)
              t.coeff(idx(kp, sigma), idx(kp, rho), idx(i, rho), idx(jp, sigma)) += Scalar(1);
          // second term: i = l, jp = kp, rho = sigma, tau = ups
          if (rho == sigma)
            for (int tau = 0; tau < m; ++tau)
              t.coeff(idx(jp, tau), idx(i, tau), idx(i, rho), idx(jp, sigma)) += Scalar(1);
        }
  return t;
}

// ---------------------------------------------------------------------------
// Evaluation

/// sum R[a][b][j][k] u^{aj} conj(u^{bk}) with u^{aj} = sum_t xi(j,t) v(a,t).
/// Complex-valued; the imaginary part is rounding noise for hermitian R.
template <class Scalar>
Scalar eval_form_complex(const CurvatureTensor<Scalar>& R, const MatrixX<Scalar>& xi,
                         const MatrixX<Scalar>& v) {
  const int n = R.base_dim();
  const int r = R.fibre_rank();
  if (xi.rows() != n || v.rows() != r || xi.cols() != v.cols())
    throw Error(Errc::dimension_mismatch, "eval_form: xi must be n x s and v must be r x s");
  VectorX<Scalar> u(static_cast<Eigen::Index>(n) * r);
  for (int a = 0; a < r; ++a)
    for (int j = 0; j < n; ++j) u(a * n + j) = (xi.row(j).array() * v.row(a).array()).sum();
  return (u.transpose() * R.nakano_matrix() * u.conjugate())(0, 0);
}

template <class Scalar>
typename CurvatureTensor<Scalar>::RealScalar eval_form(const CurvatureTensor<Scalar>& R,
                                                      const MatrixX<Scalar>& xi,
                                                      const MatrixX<Scalar>& v) {
  return std::real(eval_form_complex(R, xi, v));
}

template <class Scalar>
void require_independent(const MatrixX<Scalar>& tuple) {
  if (tuple.cols() == 0) throw Error(Errc::degenerate_tuple, "empty tuple");
  if (tuple.cols() > tuple.rows())
    throw Error(Errc::degenerate_tuple, "tuple has more vectors than the space dimension");
  const auto sv = Eigen::JacobiSVD<MatrixX<Scalar>>(tuple).singularValues();
  if (sv.minCoeff() < 1e-10) throw Error(Errc::degenerate_tuple, "tuple vectors are linearly dependent");
}

/// Fibre side: tuple columns v_t in C^r, form on (C^n)^s with
///   Q[(t,j)][(t',k)] = sum_{a,b} R[a][b][j][k] v_t^a conj(v_{t'}^b).
/// Base side: tuple columns x_t in C^n, form on (C^r)^s with
///   Q[(t,a)][(t',b)] = sum_{j,k} R[a][b][j][k] x_t^j conj(x_{t'}^k).
/// The form value at w is w^T Q conj(w); the spectrum is that of Q.
template <class Scalar>
HermitianForm<Scalar> restricted_form(const CurvatureTensor<Scalar>& R, const MatrixX<Scalar>& tuple,
                                      Side side) {
  const int n = R.base_dim();
  const int r = R.fibre_rank();
  const Eigen::Index s = tuple.cols();
  if (tuple.rows() != (side == Side::fibre_vectors ? r : n))
    throw Error(Errc::dimension_mismatch, "tuple vectors have the wrong length for this side");
  require_independent(tuple);

  HermitianForm<Scalar> out;
  if (side == Side::fibre_vectors) {
    out.matrix = MatrixX<Scalar>::Zero(s * n, s * n);
    for (Eigen::Index t = 0; t < s; ++t)
      for (Eigen::Index tp = 0; tp < s; ++tp) {
        auto blk = out.matrix.block(t * n, tp * n, n, n);
        for (int a = 0; a < r; ++a)
          for (int b = 0; b < r; ++b) {
            const Scalar c = tuple(a, t) * Eigen::numext::conj(tuple(b, tp));
            if (c != Scalar(0)) blk += c * R.block(a, b);
          }
      }
  } else {
    out.matrix = MatrixX<Scalar>::Zero(s * r, s * r);
    for (Eigen::Index t = 0; t < s; ++t)
      for (Eigen::Index tp = 0; tp < s; ++tp)
        for (int a = 0; a < r; ++a)
          for (int b = 0; b < r; ++b)
            out.matrix(t * r + a, tp * r + b) =
                (tuple.col(t).transpose() * R.block(a, b) * tuple.col(tp).conjugate())(0, 0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Positivity checks

namespace detail {

template <class Scalar>
MatrixX<Scalar> random_orthonormal(CounterRng& rng, Eigen::Index dim, Eigen::Index count) {
  MatrixX<Scalar> g(dim, count);
  for (Eigen::Index j = 0; j < count; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = Scalar(rng.complex_normal());
  Eigen::HouseholderQR<MatrixX<Scalar>> qr(g);
  return qr.householderQ() * MatrixX<Scalar>::Identity(dim, count);
}

template <class Scalar>
struct Probe {
  typename Eigen::NumTraits<Scalar>::Real min_eigenvalue;
  int kernel_dim;
  VectorX<Scalar> lowest;
  VectorX<typename Eigen::NumTraits<Scalar>::Real> eigenvalues;
  MatrixX<Scalar> eigenvectors;
};

template <class Scalar>
Probe<Scalar> probe(const HermitianForm<Scalar>& form, typename Eigen::NumTraits<Scalar>::Real tol) {
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(form.matrix);
  Probe<Scalar> p;
  p.eigenvalues = es.eigenvalues();
  p.eigenvectors = es.eigenvectors();
  p.min_eigenvalue = p.eigenvalues(0);
  p.kernel_dim = static_cast<int>((p.eigenvalues.array() < tol).count());
  p.lowest = p.eigenvectors.col(0);
  return p;
}

/// Folds one evaluated tuple into the report. Returns true if it violates.
template <class Scalar>
bool record(PositivityReport<Scalar>& rep, const Probe<Scalar>& p, const MatrixX<Scalar>& tuple, Side side) {
  const bool violates = p.min_eigenvalue < -rep.tolerance || p.kernel_dim > rep.k;
  const bool first_violation = violates && rep.verdict == Verdict::not_refuted;
  const bool new_low = !rep.witness || (rep.verdict == Verdict::not_refuted && !violates &&
                                        p.min_eigenvalue < rep.witness->min_eigenvalue);
  if (!rep.witness || p.min_eigenvalue < rep.worst_min_eigenvalue) rep.worst_min_eigenvalue = p.min_eigenvalue;
  rep.worst_kernel_dim = std::max(rep.worst_kernel_dim, p.kernel_dim);
  if (first_violation || new_low) rep.witness = Witness<Scalar>{side, tuple, p.lowest, p.min_eigenvalue, p.kernel_dim};
  if (violates) rep.verdict = Verdict::refuted;
  return violates;
}

}  // namespace detail

struct KsOptions {
  long samples = 500;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  bool refine = true;
  int refine_starts = 2;
  int refine_iterations = 40;
};

/// Falsifier for (k,s)-positivity. Draws `samples` orthonormal tuples of every
/// size 1..s on both sides (sizes above the side's dimension are skipped),
/// then runs a deterministic alternating minimisation on fibre vectors (s = 1)
/// that drives the sum of the j smallest eigenvalues down, j = 1..n. The
/// candidate set does not depend on k or s beyond the size cap, so a refutation
/// of (k+1, s) or (k, s-1) implies a refutation of (k, s).
template <class Scalar>
PositivityReport<Scalar> check_ks_positive(const CurvatureTensor<Scalar>& R, int k, int s,
                                           const KsOptions& opt = {}) {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  const int n = R.base_dim();
  const int r = R.fibre_rank();
  if (s < 1 || s > std::max(n, r))
    throw Error(Errc::invalid_input, "tuple size s must satisfy 1 <= s <= max(n, r)");
  if (k < 0) throw Error(Errc::invalid_input, "kernel bound k must be >= 0");
  if (opt.samples < 1) throw Error(Errc::invalid_input, "samples must be >= 1");

  PositivityReport<Scalar> rep;
  rep.claim = "semipositive_kernel_at_most_k";
  rep.k = k;
  rep.s = s;
  rep.seed = opt.seed;
  rep.tolerance = static_cast<Real>(opt.tol);

  for (Side side : {Side::fibre_vectors, Side::base_vectors}) {
    const int dim = side == Side::fibre_vectors ? r : n;
    for (int t = 1; t <= std::min(s, dim); ++t)
      for (long i = 0; i < opt.samples; ++i) {
        CounterRng rng(opt.seed, stream_id(static_cast<std::uint64_t>(side), static_cast<std::uint64_t>(t),
                                           static_cast<std::uint64_t>(i)));
        const MatrixX<Scalar> tuple = detail::random_orthonormal<Scalar>(rng, dim, t);
        detail::record(rep, detail::probe(restricted_form(R, tuple, side), rep.tolerance), tuple, side);
        ++rep.samples_run;
      }
  }

  if (!opt.refine) return rep;
  for (int j = 1; j <= n; ++j)
    for (int start = 0; start < opt.refine_starts; ++start) {
      CounterRng rng(opt.seed, stream_id(2, static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(start)));
      MatrixX<Scalar> v = detail::random_orthonormal<Scalar>(rng, r, 1);
      for (int it = 0; it < opt.refine_iterations; ++it) {
        const auto p = detail::probe(restricted_form(R, v, Side::fibre_vectors), rep.tolerance);
        detail::record(rep, p, v, Side::fibre_vectors);
        ++rep.refinement_steps;
        // The form value at base vector w is y^H Q y with y = conj(w).
        MatrixX<Scalar> acc = MatrixX<Scalar>::Zero(r, r);
        for (int i = 0; i < j; ++i) {
          const MatrixX<Scalar> x = p.eigenvectors.col(i).conjugate();
          acc += restricted_form(R, x, Side::base_vectors).matrix;
        }
        Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(acc);
        MatrixX<Scalar> next = es.eigenvectors().col(0).conjugate();
        next /= next.norm();
        const Real moved = std::min((next - v).norm(), (next + v).norm());
        v = std::move(next);
        if (moved < Real(1e-14)) break;
      }
    }
  return rep;
}

/// Exact Nakano check: eigenvalues of the whole (n r) x (n r) matrix, strict.
template <class Scalar>
PositivityReport<Scalar> check_nakano(const CurvatureTensor<Scalar>& R, double tol = 1e-9) {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  PositivityReport<Scalar> rep;
  rep.claim = "nakano_positive";
  rep.k = 0;
  rep.s = std::min(R.base_dim(), R.fibre_rank());
  rep.tolerance = static_cast<Real>(tol);
  rep.rng = "none";
  const auto p = detail::probe(HermitianForm<Scalar>{R.nakano_matrix()}, rep.tolerance);
  rep.samples_run = 1;
  rep.worst_min_eigenvalue = p.min_eigenvalue;
  rep.worst_kernel_dim = p.kernel_dim;
  rep.margin = p.min_eigenvalue;
  rep.witness = Witness<Scalar>{Side::fibre_vectors, MatrixX<Scalar>(), p.lowest, p.min_eigenvalue, p.kernel_dim};
  rep.verdict = p.min_eigenvalue <= rep.tolerance ? Verdict::refuted : Verdict::not_refuted;
  return rep;
}

// ---------------------------------------------------------------------------
// Curvature algebra

/// R'[a][b][j][k] = R[b][a][j][k].
template <class Scalar>
CurvatureTensor<Scalar> fibre_transpose(const CurvatureTensor<Scalar>& R) {
  CurvatureTensor<Scalar> out(R.base_dim(), R.fibre_rank());
  for (int a = 0; a < R.fibre_rank(); ++a)
    for (int b = 0; b < R.fibre_rank(); ++b) out.block(a, b) = R.block(b, a);
  return out;
}

/// Curvature of the dual bundle: -R transposed on fibre indices.
template <class Scalar>
CurvatureTensor<Scalar> dual_curvature(const CurvatureTensor<Scalar>& R) {
  CurvatureTensor<Scalar> out = fibre_transpose(R);
  out.nakano_matrix() = -out.nakano_matrix();
  return out;
}

/// R_E (x) Id_F + Id_E (x) R_F; fibre index (a, a') -> a * r_F + a'.
template <class Scalar>
CurvatureTensor<Scalar> tensor_curvature(const CurvatureTensor<Scalar>& E, const CurvatureTensor<Scalar>& F) {
  if (E.base_dim() != F.base_dim()) throw Error(Errc::dimension_mismatch, "tensor factors have different base dimension");
  const int re = E.fibre_rank();
  const int rf = F.fibre_rank();
  CurvatureTensor<Scalar> out(E.base_dim(), re * rf);
  for (int a = 0; a < re; ++a)
    for (int ap = 0; ap < rf; ++ap)
      for (int b = 0; b < re; ++b)
        for (int bp = 0; bp < rf; ++bp) {
          auto blk = out.block(a * rf + ap, b * rf + bp);
          if (ap == bp) blk += E.block(a, b);
          if (a == b) blk += F.block(ap, bp);
        }
  return out;
}

/// Curvature of det E: entry (j, k) = sum_a R[a][a][j][k].
template <class Scalar>
MatrixX<Scalar> det_curvature(const CurvatureTensor<Scalar>& R) {
  MatrixX<Scalar> out = MatrixX<Scalar>::Zero(R.base_dim(), R.base_dim());
  for (int a = 0; a < R.fibre_rank(); ++a) out += R.block(a, a);
  return out;
}

/// Rank-one bundle with the given n x n hermitian curvature matrix.
template <class Scalar>
CurvatureTensor<Scalar> line_curvature(const MatrixX<Scalar>& c) {
  return CurvatureTensor<Scalar>::from_nakano_matrix(static_cast<int>(c.rows()), 1, c,
                                                     typename Eigen::NumTraits<Scalar>::Real(1e-12));
}

/// E (x) (det E)^m: R + m delta_ab tr(R).
template <class Scalar>
CurvatureTensor<Scalar> twist_det(const CurvatureTensor<Scalar>& R, int m) {
  CurvatureTensor<Scalar> out = R;
  if (m == 0) return out;
  const MatrixX<Scalar> tr = det_curvature(R);
  for (int a = 0; a < R.fibre_rank(); ++a) out.block(a, a) += Scalar(m) * tr;
  return out;
}

/// E^* (x) (det E)^s: s delta_ab tr(R) - R[b][a][j][k].
template <class Scalar>
CurvatureTensor<Scalar> dual_twist(const CurvatureTensor<Scalar>& R, int s) {
  CurvatureTensor<Scalar> out = dual_curvature(R);
  if (s == 0) return out;
  const MatrixX<Scalar> tr = det_curvature(R);
  for (int a = 0; a < R.fibre_rank(); ++a) out.block(a, a) += Scalar(s) * tr;
  return out;
}

/// Pullback along a map whose differential `jac` sends the m-dimensional source
/// tangent space to the n-dimensional target: jac is n x m.
template <class Scalar>
CurvatureTensor<Scalar> pullback_curvature(const CurvatureTensor<Scalar>& R, const MatrixX<Scalar>& jac) {
  if (jac.rows() != R.base_dim() || jac.cols() < 1)
    throw Error(Errc::dimension_mismatch, "jacobian must have n rows and at least one column");
  const int m = static_cast<int>(jac.cols());
  CurvatureTensor<Scalar> out(m, R.fibre_rank());
  for (int a = 0; a < R.fibre_rank(); ++a)
    for (int b = 0; b < R.fibre_rank(); ++b)
      out.block(a, b) = jac.transpose() * R.block(a, b) * jac.conjugate();
  return out;
}

// ---------------------------------------------------------------------------
// Generators

/// Griffiths k-positive tensor with a fibre-side kernel of exactly the last k
/// base directions:
///   R = c0 Id_r (x) P + sum_t c_t (a_t a_t^*) (x) (b_t b_t^*),
/// P the projector onto the first n-k base coordinates and every b_t supported
/// there. Verified with check_ks_positive(k, 1) before it is returned.
template <class Scalar = std::complex<double>>
CurvatureTensor<Scalar> sample_griffiths_k(int n, int r, int k, std::uint64_t seed, int max_retries = 8) {
  if (n < 1 || r < 1) throw Error(Errc::invalid_rank, "sample_griffiths_k needs n, r >= 1");
  if (k < 0 || k >= n) throw Error(Errc::invalid_input, "sample_griffiths_k needs 0 <= k < n");
  const int live = n - k;
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    CounterRng rng(seed, stream_id(0x6b, static_cast<std::uint64_t>(attempt)));
    CurvatureTensor<Scalar> R(n, r);
    const double c0 = rng.uniform(0.5, 1.5);
    for (int a = 0; a < r; ++a)
      for (int j = 0; j < live; ++j) R.coeff(a, a, j, j) = Scalar(c0);
    const int terms = n + r;
    for (int t = 0; t < terms; ++t) {
      const double c = rng.uniform(0.25, 1.0);
      VectorX<Scalar> av(r);
      VectorX<Scalar> bv = VectorX<Scalar>::Zero(n);
      for (int a = 0; a < r; ++a) av(a) = Scalar(rng.complex_normal());
      for (int j = 0; j < live; ++j) bv(j) = Scalar(rng.complex_normal());
      av.normalize();
      bv.normalize();
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
          R.block(a, b) += Scalar(c) * av(a) * Eigen::numext::conj(av(b)) * (bv * bv.adjoint());
    }
    // Exact hermitian symmetry: average with the adjoint to remove rounding asymmetry.
    R.nakano_matrix() = (R.nakano_matrix() + R.nakano_matrix().adjoint().eval()) * Scalar(0.5);
    KsOptions check;
    check.samples = 16;
    check.seed = splitmix64(seed ^ static_cast<std::uint64_t>(attempt));
    if (!check_ks_positive(R, k, 1, check).refuted()) return R;
  }
  throw Error(Errc::generator_failure, "sample_griffiths_k: retries exhausted");
}

/// A A^* + eps Id over the whole Nakano matrix.
template <class Scalar = std::complex<double>>
CurvatureTensor<Scalar> sample_nakano_positive(int n, int r, std::uint64_t seed, double eps = 0.1) {
  if (n < 1 || r < 1) throw Error(Errc::invalid_rank, "sample_nakano_positive needs n, r >= 1");
  const Eigen::Index d = static_cast<Eigen::Index>(n) * r;
  CounterRng rng(seed, stream_id(0x6e));
  MatrixX<Scalar> a(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) a(i, j) = Scalar(rng.complex_normal());
  MatrixX<Scalar> h = a * a.adjoint() / Scalar(static_cast<double>(d));
  h = (h + h.adjoint().eval()) * Scalar(0.5);
  h += Scalar(eps) * MatrixX<Scalar>::Identity(d, d);
  return CurvatureTensor<Scalar>::from_nakano_matrix(n, r, std::move(h));
}

}  // namespace kspos
