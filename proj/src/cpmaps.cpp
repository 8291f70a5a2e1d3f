#include "cpmean/cpmaps.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cpmean/errors.hpp"

namespace cpmean {

namespace {

void require_positive_dims(Index dim_in, Index dim_out) {
  if (dim_in < 1 || dim_out < 1)
    throw ShapeError("map dimensions must be positive, got " + std::to_string(dim_in) + " -> " +
                     std::to_string(dim_out));
}

void require_same_shape(const CpMap& a, const CpMap& b, const char* what) {
  if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out())
    throw ShapeError(std::string(what) + ": maps have different dimensions");
}

std::string dims(Index r, Index c) { return std::to_string(r) + "x" + std::to_string(c); }

}  // namespace

// ---------------------------------------------------------------------------
// CpMap

CpMap::CpMap(Index dim_in, Index dim_out, PsdMatrix choi, std::optional<std::vector<Matrix>> kraus)
    : dim_in_(dim_in), dim_out_(dim_out), choi_(std::move(choi)), kraus_(std::move(kraus)) {}

CpMap CpMap::from_choi(Index dim_in, Index dim_out, const Matrix& choi, const Tolerances& tol) {
  require_positive_dims(dim_in, dim_out);
  const Index size = dim_in * dim_out;
  if (choi.rows() != size || choi.cols() != size)
    throw ShapeError("Choi matrix must be " + dims(size, size) + ", got " +
                     dims(choi.rows(), choi.cols()));
  const HermitianMatrix h = HermitianMatrix::checked(choi, tol.herm);
  PsdMatrix p = PsdMatrix::trusted(h.matrix());
  if (p.min_eigenvalue() < -scaled(tol.psd, p.norm()))
    throw NotCompletelyPositive("Choi matrix is not positive semidefinite (min eigenvalue " +
                                std::to_string(p.min_eigenvalue()) + ")");
  return CpMap(dim_in, dim_out, std::move(p), std::nullopt);
}

CpMap CpMap::from_kraus(Index dim_in, Index dim_out, std::vector<Matrix> kraus) {
  require_positive_dims(dim_in, dim_out);
  PsdMatrix choi = PsdMatrix::trusted(choi_from_kraus(kraus, dim_in, dim_out));
  return CpMap(dim_in, dim_out, std::move(choi), std::move(kraus));
}

CpMap CpMap::trusted(Index dim_in, Index dim_out, PsdMatrix choi) {
  require_positive_dims(dim_in, dim_out);
  if (choi.dim() != dim_in * dim_out) throw ShapeError("Choi matrix size does not match dims");
  return CpMap(dim_in, dim_out, std::move(choi), std::nullopt);
}

// ---------------------------------------------------------------------------
// Representations

Vector vec(const Matrix& k) {
  const Index n = k.rows();
  Vector v(k.size());
  for (Index i = 0; i < k.cols(); ++i)
    for (Index r = 0; r < n; ++r) v(i * n + r) = k(r, i);
  return v;
}

Matrix unvec(const Vector& v, Index dim_in, Index dim_out) {
  if (v.size() != dim_in * dim_out) throw ShapeError("unvec: vector length does not match dims");
  Matrix k(dim_out, dim_in);
  for (Index i = 0; i < dim_in; ++i)
    for (Index r = 0; r < dim_out; ++r) k(r, i) = v(i * dim_out + r);
  return k;
}

Matrix choi_from_kraus(const std::vector<Matrix>& kraus, Index dim_in, Index dim_out) {
  const Index size = dim_in * dim_out;
  Matrix c = Matrix::Zero(size, size);
  for (const Matrix& k : kraus) {
    if (k.rows() != dim_out || k.cols() != dim_in)
      throw ShapeError("Kraus operator must be " + dims(dim_out, dim_in) + ", got " +
                       dims(k.rows(), k.cols()));
    const Vector v = vec(k);
    if (!v.allFinite()) throw InvalidInput("Kraus operator has non-finite entries");
    c.noalias() += v * v.adjoint();
  }
  return c;
}

CpMap choi_from_action(Index dim_in, Index dim_out,
                       const std::function<Matrix(Index, Index)>& action, const Tolerances& tol) {
  require_positive_dims(dim_in, dim_out);
  const Index n = dim_out;
  Matrix c(dim_in * n, dim_in * n);
  for (Index i = 0; i < dim_in; ++i)
    for (Index j = 0; j < dim_in; ++j) {
      const Matrix block = action(i, j);
      if (block.rows() != n || block.cols() != n)
        throw ShapeError("action must return " + dims(n, n) + " matrices");
      c.block(i * n, j * n, n, n) = block;
    }
  return CpMap::from_choi(dim_in, dim_out, c, tol);
}

std::vector<Matrix> kraus_decompose(const CpMap& map, double rank_rtol) {
  const Spectrum& s = map.choi().spectrum();
  const double cut = rank_cutoff(map.choi(), rank_rtol);
  std::vector<Matrix> out;
  for (Index i = s.values.size() - 1; i >= 0; --i) {
    const double lam = s.values(i);
    if (!(lam > cut) || lam <= 0.0) break;
    out.push_back(std::sqrt(lam) * unvec(s.vectors.col(i), map.dim_in(), map.dim_out()));
  }
  return out;
}

Matrix apply_map(const CpMap& map, const Matrix& x) {
  const Index m = map.dim_in();
  const Index n = map.dim_out();
  if (x.rows() != m || x.cols() != m)
    throw ShapeError("apply: input must be " + dims(m, m) + ", got " + dims(x.rows(), x.cols()));
  const Matrix& c = map.choi().matrix();
  Matrix out = Matrix::Zero(n, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      if (x(i, j) != Complex(0.0)) out += x(i, j) * c.block(i * n, j * n, n, n);
  return out;
}

CpMap scale(const CpMap& map, double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("CP maps scale by finite c >= 0 only");
  return CpMap::trusted(map.dim_in(), map.dim_out(), PsdMatrix::trusted(c * map.choi().matrix()));
}

CpMap add(const CpMap& a, const CpMap& b) {
  require_same_shape(a, b, "add");
  return CpMap::trusted(a.dim_in(), a.dim_out(),
                        PsdMatrix::trusted(a.choi().matrix() + b.choi().matrix()));
}

// ---------------------------------------------------------------------------
// Order and means

bool leq_cp(const CpMap& phi, const CpMap& psi, double tol_psd) {
  require_same_shape(phi, psi, "leq_cp");
  return is_psd(HermitianMatrix(psi.choi().matrix() - phi.choi().matrix()), tol_psd);
}

CpOrder compare_cp(const CpMap& phi, const CpMap& psi, double tol_psd) {
  const bool le = leq_cp(phi, psi, tol_psd);
  const bool ge = leq_cp(psi, phi, tol_psd);
  if (le && ge) return CpOrder::equal;
  if (le) return CpOrder::less;
  if (ge) return CpOrder::greater;
  return CpOrder::incomparable;
}

const char* to_string(CpOrder order) {
  switch (order) {
    case CpOrder::equal: return "equal";
    case CpOrder::less: return "<=cp";
    case CpOrder::greater: return ">=cp";
    case CpOrder::incomparable: return "incomparable";
  }
  return "unknown";
}

CpMap mean_cp(const MeanKind& kind, const CpMap& phi, const CpMap& psi, const MeanOptions& opts) {
  require_same_shape(phi, psi, "mean");
  return CpMap::trusted(phi.dim_in(), phi.dim_out(), mean(kind, phi.choi(), psi.choi(), opts));
}

bool geo_certificate(const CpMap& phi, const CpMap& psi, const CpMap& theta, double tol_psd) {
  require_same_shape(phi, psi, "geo_certificate");
  require_same_shape(phi, theta, "geo_certificate");
  const Index s = phi.choi().dim();
  Matrix block(2 * s, 2 * s);
  block.topLeftCorner(s, s) = phi.choi().matrix();
  block.topRightCorner(s, s) = theta.choi().matrix();
  block.bottomLeftCorner(s, s) = theta.choi().matrix();
  block.bottomRightCorner(s, s) = psi.choi().matrix();
  return is_psd(HermitianMatrix(block), tol_psd);
}

// ---------------------------------------------------------------------------
// Tensor products and composition

Matrix permute_tensor_legs(const Matrix& kron_choi, Index in1, Index out1, Index in2, Index out2) {
  const Index size = in1 * out1 * in2 * out2;
  if (kron_choi.rows() != size || kron_choi.cols() != size)
    throw ShapeError("permute_tensor_legs: size mismatch");
  const Index n = out1 * out2;
  // (i1, k1, i2, k2) in the Kronecker layout -> (i1, i2, k1, k2).
  std::vector<Index> perm(static_cast<std::size_t>(size));
  for (Index i1 = 0; i1 < in1; ++i1)
    for (Index k1 = 0; k1 < out1; ++k1)
      for (Index i2 = 0; i2 < in2; ++i2)
        for (Index k2 = 0; k2 < out2; ++k2) {
          const Index src = ((i1 * out1 + k1) * in2 + i2) * out2 + k2;
          const Index dst = (i1 * in2 + i2) * n + (k1 * out2 + k2);
          perm[static_cast<std::size_t>(dst)] = src;
        }
  Matrix out(size, size);
  for (Index r = 0; r < size; ++r)
    for (Index c = 0; c < size; ++c)
      out(r, c) = kron_choi(perm[static_cast<std::size_t>(r)], perm[static_cast<std::size_t>(c)]);
  return out;
}

CpMap tensor(const CpMap& phi1, const CpMap& phi2) {
  const Matrix c = permute_tensor_legs(kron(phi1.choi().matrix(), phi2.choi().matrix()),
                                       phi1.dim_in(), phi1.dim_out(), phi2.dim_in(), phi2.dim_out());
  return CpMap::trusted(phi1.dim_in() * phi2.dim_in(), phi1.dim_out() * phi2.dim_out(),
                        PsdMatrix::trusted(c));
}

CpMap compose(const CpMap& outer, const CpMap& inner) {
  if (outer.dim_in() != inner.dim_out())
    throw ShapeError("compose: inner output dimension " + std::to_string(inner.dim_out()) +
                     " does not match outer input dimension " + std::to_string(outer.dim_in()));
  const Index m = inner.dim_in();
  const Index p = inner.dim_out();
  const Index n = outer.dim_out();
  const Matrix& c = inner.choi().matrix();
  Matrix out(m * n, m * n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      out.block(i * n, j * n, n, n) = apply_map(outer, c.block(i * p, j * p, p, p));
  return CpMap::trusted(m, n, PsdMatrix::trusted(out));
}

// ---------------------------------------------------------------------------
// Index and flags

double ExtendedReal::value() const {
  if (infinite_) throw std::logic_error("ExtendedReal::value on +infinity");
  return value_;
}

ExtendedReal index_cp(const CpMap& map, const Tolerances& tol) {
  if (map.dim_in() != map.dim_out())
    throw ShapeError("index is defined for maps M_n -> M_n only");
  const Index n = map.dim_in();
  Vector v = Vector::Zero(n * n);
  for (Index i = 0; i < n; ++i) v(i * n + i) = 1.0;
  const Projection support = support_projection(map.choi(), tol.rank_rtol);
  const Vector inside = support.basis() * (support.basis().adjoint() * v);
  constexpr double kRangeTol = 1e-8;
  if ((v - inside).norm() > kRangeTol * v.norm()) return ExtendedReal::infinity();
  const PsdMatrix pinv = pinv_psd(map.choi(), tol.rank_rtol);
  return ExtendedReal::finite(std::max(0.0, v.dot(pinv.matrix() * v).real()));
}

ChannelFlags channel_flags(const CpMap& map, double tolerance, double tol_psd) {
  ChannelFlags f;
  f.tolerance = tolerance;
  const Index m = map.dim_in();
  const Index n = map.dim_out();
  const Matrix& c = map.choi().matrix();
  f.min_choi_eigenvalue = map.choi().min_eigenvalue();
  f.is_cp = f.min_choi_eigenvalue >= -scaled(tol_psd, map.choi().norm());

  f.unital_residual = spectral_norm(apply_map(map, Matrix::Identity(m, m)) - Matrix::Identity(n, n));
  Matrix traces(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) traces(i, j) = c.block(i * n, j * n, n, n).trace();
  f.trace_residual = spectral_norm(traces - Matrix::Identity(m, m));
  f.is_unital = f.unital_residual <= tolerance;
  f.is_trace_preserving = f.trace_residual <= tolerance;
  return f;
}

}  // namespace cpmean
