#pragma once

// Dense Hermitian / positive-semidefinite linear algebra: spectral
// decompositions, matrix functions, pseudo-inverses, support projections,
// subspace intersections and shorted operators.

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <memory>
#include <mutex>

#include "cpmean/tolerances.hpp"

namespace cpmean {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Square complex matrix that is Hermitian by construction: the input is
/// replaced by (M + M*) / 2 after shape and finiteness checks.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const Matrix& m);

  /// Like the constructor, but rejects inputs whose anti-Hermitian part
  /// exceeds tol_herm * max(1, |M|) instead of silently symmetrizing them.
  static HermitianMatrix checked(const Matrix& m, double tol_herm = kDefaultTolerances.herm);

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

struct Spectrum {
  RealVector values;  // ascending
  Matrix vectors;     // unitary, columns are eigenvectors
};

/// Ascending eigen-decomposition. Deterministic for identical input bits.
Spectrum eigh(const HermitianMatrix& h);

bool is_psd(const HermitianMatrix& h, double tol = kDefaultTolerances.psd);

/// Hermitian PSD matrix with lazily computed, thread-safe cached spectrum.
/// Copies share the cache; the value itself is immutable.
class PsdMatrix {
 public:
  /// Validates the smallest eigenvalue against -tol_psd * max(1, |H|);
  /// throws DomainError otherwise.
  explicit PsdMatrix(const HermitianMatrix& h, double tol_psd = kDefaultTolerances.psd);
  explicit PsdMatrix(const Matrix& m, double tol_psd = kDefaultTolerances.psd)
      : PsdMatrix(HermitianMatrix(m), tol_psd) {}

  /// Wraps the output of an operation that is PSD in exact arithmetic.
  /// Only symmetrizes; rounding drift is handled where spectra are used.
  static PsdMatrix trusted(const Matrix& m);
  static PsdMatrix zero(Index dim);
  static PsdMatrix identity(Index dim);

  Index dim() const { return base_.dim(); }
  const Matrix& matrix() const { return base_.matrix(); }
  const HermitianMatrix& hermitian() const { return base_; }
  const Spectrum& spectrum() const;

  double norm() const;  // spectral norm
  double min_eigenvalue() const { return spectrum().values(0); }
  double max_eigenvalue() const { return spectrum().values(dim() - 1); }

 private:
  struct Cache {
    std::once_flag once;
    Spectrum spectrum;
  };
  struct TrustedTag {};
  PsdMatrix(HermitianMatrix h, TrustedTag);

  HermitianMatrix base_;
  std::shared_ptr<Cache> cache_;
};

/// Orthogonal projection, stored together with an orthonormal basis of its
/// range (n x rank) so callers can work in range coordinates.
class Projection {
 public:
  static Projection from_basis(const Matrix& orthonormal_columns, Index dim);
  static Projection zero(Index dim) { return from_basis(Matrix(dim, 0), dim); }
  static Projection identity(Index dim) { return from_basis(Matrix::Identity(dim, dim), dim); }

  /// Accepts a matrix claimed to be a projection; throws DomainError unless
  /// P = P*, P^2 = P and its eigenvalues lie in {0, 1} within tolerance.
  static Projection checked(const Matrix& p, const Tolerances& tol = kDefaultTolerances);

  Index dim() const { return base_.dim(); }
  Index rank() const { return basis_.cols(); }
  const Matrix& matrix() const { return base_.matrix(); }
  const PsdMatrix& psd() const { return base_; }
  const Matrix& basis() const { return basis_; }
  /// Orthonormal basis of the orthogonal complement of the range.
  Matrix complement_basis() const;

 private:
  Projection(PsdMatrix base, Matrix basis) : base_(std::move(base)), basis_(std::move(basis)) {}
  PsdMatrix base_;
  Matrix basis_;
};

double spectral_norm(const Matrix& m);
double max_abs(const Matrix& m);
Matrix hermitian_part(const Matrix& m);

/// Cutoff below which eigenvalues are treated as zero: rank_rtol * lambda_max.
double rank_cutoff(const PsdMatrix& a, double rank_rtol);

/// Applies f to the eigenvalues; eigenvalues in [-tol_psd*scale, 0) are
/// clamped to zero first, anything more negative raises NumericalError.
PsdMatrix apply_spectral(const PsdMatrix& a, const std::function<double(double)>& f,
                         double tol_psd = kDefaultTolerances.psd);

PsdMatrix psd_sqrt(const PsdMatrix& a);
PsdMatrix pinv_psd(const PsdMatrix& a, double rank_rtol = kDefaultTolerances.rank_rtol);
Projection support_projection(const PsdMatrix& a, double rank_rtol = kDefaultTolerances.rank_rtol);

/// lambda -> lambda^p for p in [-1, 1]; zero eigenvalues stay zero, and for
/// p <= 0 the power is taken on the support only (pseudo-power).
PsdMatrix frac_power_psd(const PsdMatrix& a, double p,
                         double rank_rtol = kDefaultTolerances.rank_rtol);

/// Projection onto ran(P) ∩ ran(Q): the common null space of I-P and I-Q.
Projection proj_intersection(const Projection& p, const Projection& q);

/// Shorted operator of A to the subspace spanned by the orthonormal columns
/// of W, returned in W-coordinates (k x k):
///   W*AW - W*AW⊥ (W⊥*AW⊥)^+ W⊥*AW.
/// It is the largest X >= 0 with X <= A and ran X ⊆ ran W.
Matrix shorted_in_basis(const PsdMatrix& a, const Projection& subspace,
                        double rank_rtol = kDefaultTolerances.rank_rtol);

/// Shorted operator as an n x n matrix.
PsdMatrix shorted(const PsdMatrix& a, const Projection& subspace,
                  double rank_rtol = kDefaultTolerances.rank_rtol);

/// Kronecker product a ⊗ b (row index i_a * rows(b) + i_b).
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace cpmean
