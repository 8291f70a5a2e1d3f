#include "cpmean/hermlinalg.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cpmean/errors.hpp"

namespace cpmean {

namespace {

bool all_finite(const Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

Matrix reconstruct(const Spectrum& s, const RealVector& mapped) {
  return s.vectors * mapped.asDiagonal() * s.vectors.adjoint();
}

}  // namespace

// ---------------------------------------------------------------------------
// HermitianMatrix

HermitianMatrix::HermitianMatrix(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw ShapeError("Hermitian matrix must be square and non-empty, got " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  if (!all_finite(m)) throw InvalidInput("matrix has non-finite entries");
  m_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::checked(const Matrix& m, double tol_herm) {
  HermitianMatrix h(m);
  const double asym = max_abs(m - m.adjoint());
  if (asym > scaled(tol_herm, max_abs(m)))
    throw InvalidInput("matrix is not Hermitian (asymmetry " + std::to_string(asym) + ")");
  return h;
}

Spectrum eigh(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");
  return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

bool is_psd(const HermitianMatrix& h, double tol) {
  const Spectrum s = eigh(h);
  const double norm = std::max(std::abs(s.values(0)), std::abs(s.values(s.values.size() - 1)));
  return s.values(0) >= -scaled(tol, norm);
}

// ---------------------------------------------------------------------------
// PsdMatrix

PsdMatrix::PsdMatrix(HermitianMatrix h, TrustedTag) : base_(std::move(h)), cache_(std::make_shared<Cache>()) {}

PsdMatrix::PsdMatrix(const HermitianMatrix& h, double tol_psd) : PsdMatrix(h, TrustedTag{}) {
  const double lo = min_eigenvalue();
  if (lo < -scaled(tol_psd, norm()))
    throw DomainError("matrix is not positive semidefinite (min eigenvalue " +
                      std::to_string(lo) + ")");
}

PsdMatrix PsdMatrix::trusted(const Matrix& m) { return PsdMatrix(HermitianMatrix(m), TrustedTag{}); }

PsdMatrix PsdMatrix::zero(Index dim) { return trusted(Matrix::Zero(dim, dim)); }

PsdMatrix PsdMatrix::identity(Index dim) { return trusted(Matrix::Identity(dim, dim)); }

const Spectrum& PsdMatrix::spectrum() const {
  std::call_once(cache_->once, [this] { cache_->spectrum = eigh(base_); });
  return cache_->spectrum;
}

double PsdMatrix::norm() const {
  const RealVector& v = spectrum().values;
  return std::max(std::abs(v(0)), std::abs(v(v.size() - 1)));
}

// ---------------------------------------------------------------------------
// Projection

Projection Projection::from_basis(const Matrix& w, Index dim) {
  if (w.rows() != dim) throw ShapeError("projection basis has wrong row count");
  // Build the projector first: argument evaluation order is unspecified.
  PsdMatrix p = PsdMatrix::trusted(w * w.adjoint());
  return Projection(std::move(p), Matrix(w));
}

Projection Projection::checked(const Matrix& p, const Tolerances& tol) {
  const HermitianMatrix h = HermitianMatrix::checked(p, tol.herm);
  const Matrix& m = h.matrix();
  if (max_abs(m * m - m) > scaled(tol.recon, max_abs(m)))
    throw DomainError("matrix is not idempotent");
  const Spectrum s = eigh(h);
  Index rank = 0;
  for (Index i = 0; i < s.values.size(); ++i) {
    const double v = s.values(i);
    if (std::abs(v) > tol.psd && std::abs(v - 1.0) > tol.psd)
      throw DomainError("projection eigenvalue outside {0,1}: " + std::to_string(v));
    if (v > 0.5) ++rank;
  }
  return from_basis(s.vectors.rightCols(rank), h.dim());
}

Matrix Projection::complement_basis() const {
  const Index n = dim();
  const Index k = rank();
  if (k == 0) return Matrix::Identity(n, n);
  Eigen::HouseholderQR<Matrix> qr(basis_);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  return q.rightCols(n - k);
}

// ---------------------------------------------------------------------------
// Free functions

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double max_abs(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

double rank_cutoff(const PsdMatrix& a, double rank_rtol) {
  return rank_rtol * std::max(a.max_eigenvalue(), 0.0);
}

PsdMatrix apply_spectral(const PsdMatrix& a, const std::function<double(double)>& f,
                         double tol_psd) {
  const Spectrum& s = a.spectrum();
  const double floor = -scaled(tol_psd, a.norm());
  RealVector mapped(s.values.size());
  for (Index i = 0; i < s.values.size(); ++i) {
    double v = s.values(i);
    if (v < 0.0) {
      if (v < floor)
        throw NumericalError("negative eigenvalue " + std::to_string(v) +
                             " beyond PSD tolerance in matrix function");
      v = 0.0;
    }
    mapped(i) = f(v);
  }
  return PsdMatrix::trusted(reconstruct(s, mapped));
}

PsdMatrix psd_sqrt(const PsdMatrix& a) {
  // Eigenvalues at rounding level would otherwise surface as ~1e-8 after the root.
  const double noise = static_cast<double>(a.dim()) * std::numeric_limits<double>::epsilon() *
                       std::max(a.max_eigenvalue(), 0.0);
  return apply_spectral(a, [noise](double v) { return v > noise ? std::sqrt(v) : 0.0; });
}

PsdMatrix pinv_psd(const PsdMatrix& a, double rank_rtol) {
  const double cut = rank_cutoff(a, rank_rtol);
  return apply_spectral(a, [cut](double v) { return v > cut ? 1.0 / v : 0.0; });
}

Projection support_projection(const PsdMatrix& a, double rank_rtol) {
  const Spectrum& s = a.spectrum();
  const double cut = rank_cutoff(a, rank_rtol);
  Index first = s.values.size();
  while (first > 0 && s.values(first - 1) > cut && s.values(first - 1) > 0.0) --first;
  return Projection::from_basis(s.vectors.rightCols(s.values.size() - first), a.dim());
}

PsdMatrix frac_power_psd(const PsdMatrix& a, double p, double rank_rtol) {
  if (!(p >= -1.0 && p <= 1.0)) throw DomainError("fractional power must lie in [-1, 1]");
  if (p > 0.0) return apply_spectral(a, [p](double v) { return std::pow(v, p); });
  const double cut = rank_cutoff(a, rank_rtol);
  return apply_spectral(a, [p, cut](double v) { return v > cut ? std::pow(v, p) : 0.0; });
}

Projection proj_intersection(const Projection& p, const Projection& q) {
  if (p.dim() != q.dim()) throw ShapeError("projection dimensions differ");
  const Index n = p.dim();
  const Matrix defect = 2.0 * Matrix::Identity(n, n) - p.matrix() - q.matrix();
  const Spectrum s = eigh(HermitianMatrix(defect));
  // Eigenvalues of (I-P)+(I-Q) are 0 exactly on the intersection and at
  // least 1 - cos(angle) elsewhere.
  constexpr double kNullTol = 1e-9;
  Index k = 0;
  while (k < n && s.values(k) <= kNullTol) ++k;
  return Projection::from_basis(s.vectors.leftCols(k), n);
}

Matrix shorted_in_basis(const PsdMatrix& a, const Projection& subspace, double rank_rtol) {
  if (a.dim() != subspace.dim()) throw ShapeError("shorted operator: dimension mismatch");
  const Matrix& w = subspace.basis();
  const Matrix wc = subspace.complement_basis();
  const Matrix a11 = w.adjoint() * a.matrix() * w;
  if (wc.cols() == 0) return hermitian_part(a11);
  const Matrix a12 = w.adjoint() * a.matrix() * wc;
  const Matrix a22 = wc.adjoint() * a.matrix() * wc;
  // Cutoff relative to |A|, so an a22 block made of rounding noise is not inverted.
  const double cut = rank_rtol * std::max(a.norm(), 0.0);
  const Spectrum s = eigh(HermitianMatrix(a22));
  RealVector inv(s.values.size());
  for (Index i = 0; i < s.values.size(); ++i) inv(i) = s.values(i) > cut ? 1.0 / s.values(i) : 0.0;
  const Matrix a22_pinv = reconstruct(s, inv);
  return hermitian_part(a11 - a12 * a22_pinv * a12.adjoint());
}

PsdMatrix shorted(const PsdMatrix& a, const Projection& subspace, double rank_rtol) {
  const Matrix& w = subspace.basis();
  return PsdMatrix::trusted(w * shorted_in_basis(a, subspace, rank_rtol) * w.adjoint());
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace cpmean
