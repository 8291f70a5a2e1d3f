#include "cpmean/zoo.hpp"

#include <cmath>
#include <string>

#include "cpmean/errors.hpp"

namespace cpmean {

namespace {

Matrix unit(Index d, Index i, Index j) {
  Matrix e = Matrix::Zero(d, d);
  e(i, j) = 1.0;
  return e;
}

}  // namespace

CpMap identity_map(Index d) {
  if (d < 1) throw DomainError("identity map needs d >= 1");
  return CpMap::from_kraus(d, d, {Matrix::Identity(d, d)});
}

CpMap depolarizing(Index d) {
  if (d < 1) throw DomainError("depolarizing channel needs d >= 1");
  const Index s = d * d;
  return CpMap::trusted(d, d, PsdMatrix::trusted(Matrix::Identity(s, s) / static_cast<double>(d)));
}

CpMap conjugation(const Matrix& k) {
  if (k.size() == 0) throw DomainError("conjugation needs a non-empty operator");
  if (!k.allFinite()) throw DomainError("conjugation operator has non-finite entries");
  return CpMap::from_kraus(k.cols(), k.rows(), {k});
}

CpMap unitary_conj(const Matrix& u) {
  if (u.rows() != u.cols() || u.rows() < 1) throw DomainError("unitary must be square");
  if (!u.allFinite() ||
      max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())) > 1e-8)
    throw DomainError("matrix is not unitary");
  return conjugation(u);
}

CpMap schur(const Matrix& a, const Tolerances& tol) {
  PsdMatrix p = [&] {
    try {
      return PsdMatrix(HermitianMatrix::checked(a, tol.herm), tol.psd);
    } catch (const ValidationError& e) {
      throw DomainError(std::string("Schur multiplier must be PSD: ") + e.what());
    }
  }();
  const Index d = a.rows();
  Matrix c = Matrix::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) c(i * d + i, j * d + j) = p.matrix()(i, j);
  return CpMap::trusted(d, d, PsdMatrix::trusted(c));
}

CpMap cond_exp_diag(Index d) {
  if (d < 1) throw DomainError("conditional expectation needs d >= 1");
  return choi_from_action(d, d, [d](Index i, Index j) -> Matrix {
    return i == j ? unit(d, i, i) : Matrix::Zero(d, d);
  });
}

CpMap cond_exp_rotated(double theta) {
  if (!std::isfinite(theta)) throw DomainError("rotation angle must be finite");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Matrix u(2, 2);
  u << c, -s, s, c;
  const CpMap diag = cond_exp_diag(2);
  return choi_from_action(2, 2, [&](Index i, Index j) -> Matrix {
    return u * apply_map(diag, u.adjoint() * unit(2, i, j) * u) * u.adjoint();
  });
}

CpMap cond_exp_tensor(int factor, const std::vector<double>& weights) {
  if (factor != 1 && factor != 2) throw DomainError("tensor factor must be 1 or 2");
  if (weights.empty()) throw DomainError("conditional expectation needs weights");
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("weights must be positive and finite");
  const Index n = static_cast<Index>(weights.size());
  const Index d = n * n;
  // Acts on x in M_n ⊗ M_n with row index (a, b) = a*n + b.
  auto action = [&](Index i, Index j) -> Matrix {
    const Index i1 = i / n, i2 = i % n, j1 = j / n, j2 = j % n;
    Matrix out = Matrix::Zero(d, d);
    if (factor == 1) {
      if (i2 != j2) return out;
      const double w = weights[static_cast<std::size_t>(i2)];
      for (Index q = 0; q < n; ++q) out(i1 * n + q, j1 * n + q) = w;
    } else {
      if (i1 != j1) return out;
      const double w = weights[static_cast<std::size_t>(i1)];
      for (Index q = 0; q < n; ++q) out(q * n + i2, q * n + j2) = w;
    }
    return out;
  };
  return choi_from_action(d, d, action);
}

CpMap scalar_embedding(const Matrix& a, const Tolerances& tol) {
  PsdMatrix p = [&] {
    try {
      return PsdMatrix(HermitianMatrix::checked(a, tol.herm), tol.psd);
    } catch (const ValidationError& e) {
      throw DomainError(std::string("embedded operator must be PSD: ") + e.what());
    }
  }();
  return CpMap::trusted(1, a.rows(), std::move(p));
}

CpMap functional(const DensityFunctional& f) {
  return CpMap::trusted(f.dim(), 1, PsdMatrix::trusted(f.rho.matrix().transpose()));
}

StateMeanQuantities state_mean_quantities(const DensityFunctional& rho,
                                          const DensityFunctional& sigma, const Tolerances& tol) {
  if (rho.dim() != sigma.dim()) throw ShapeError("density matrices differ in dimension");
  StateMeanQuantities q;
  q.gm_trace = geometric_mean(rho.rho, sigma.rho, tol).matrix().trace().real();
  const PsdMatrix rho_half = psd_sqrt(rho.rho);
  const PsdMatrix sigma_half = psd_sqrt(sigma.rho);
  q.sqrt_trace = (rho_half.matrix() * sigma_half.matrix()).trace().real();
  const PsdMatrix inner =
      PsdMatrix::trusted(rho_half.matrix() * sigma.rho.matrix() * rho_half.matrix());
  q.fidelity = psd_sqrt(inner).matrix().trace().real();
  return q;
}

}  // namespace cpmean
