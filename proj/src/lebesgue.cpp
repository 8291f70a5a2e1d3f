#include "cpmean/lebesgue.hpp"

#include <cmath>
#include <string>

#include "cpmean/errors.hpp"
#include "cpmean/opmeans.hpp"

namespace cpmean {

namespace {

void require_same_shape(const CpMap& a, const CpMap& b, const char* what) {
  if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out())
    throw ShapeError(std::string(what) + ": maps have different dimensions");
}

// A' and B' have spectra in [0, 1], so their supports use an absolute cutoff.
Projection unit_interval_support(const PsdMatrix& x, double cut) {
  const Spectrum& s = x.spectrum();
  Index first = s.values.size();
  while (first > 0 && s.values(first - 1) > cut) --first;
  return Projection::from_basis(s.vectors.rightCols(s.values.size() - first), x.dim());
}

CpMap with_choi(const CpMap& like, const Matrix& choi) {
  return CpMap::trusted(like.dim_in(), like.dim_out(), PsdMatrix::trusted(choi));
}

}  // namespace

RnPair rn_pair(const CpMap& phi, const CpMap& psi, const Tolerances& tol) {
  require_same_shape(phi, psi, "rn_pair");
  const PsdMatrix c = PsdMatrix::trusted(phi.choi().matrix() + psi.choi().matrix());
  const PsdMatrix c_half = psd_sqrt(c);
  const Matrix c_inv_half = frac_power_psd(c, -0.5, tol.rank_rtol).matrix();
  return RnPair{
      c_half,
      PsdMatrix::trusted(c_inv_half * phi.choi().matrix() * c_inv_half),
      PsdMatrix::trusted(c_inv_half * psi.choi().matrix() * c_inv_half),
      support_projection(c, tol.rank_rtol),
  };
}

CpMap ac_part(const CpMap& phi, const CpMap& psi, const Tolerances& tol) {
  const RnPair rn = rn_pair(phi, psi, tol);
  const Matrix p = unit_interval_support(rn.a_prime, tol.rank_rtol).matrix();
  const Matrix& h = rn.c_half.matrix();
  return with_choi(psi, h * (p * rn.b_prime.matrix() * p) * h);
}

double limit_tolerance(const CpMap& psi, const Tolerances& tol) {
  return scaled(tol.lim, psi.choi().norm());
}

CpMap ac_part_oracle(const CpMap& phi, const CpMap& psi, double n_max, double tol_lim,
                     const Tolerances& tol) {
  require_same_shape(phi, psi, "ac_part_oracle");
  if (!(n_max >= 2.0) || !std::isfinite(n_max)) throw DomainError("oracle needs n_max >= 2");
  if (tol_lim < 0.0) tol_lim = limit_tolerance(psi, tol);
  const int steps = static_cast<int>(std::floor(std::log2(n_max)));
  Matrix previous = parallel_sum(phi.choi(), psi.choi(), tol).matrix();
  Matrix current = previous;
  for (int k = 1; k <= steps; ++k) {
    previous = current;
    const PsdMatrix scaled_phi = PsdMatrix::trusted(std::ldexp(1.0, k) * phi.choi().matrix());
    current = parallel_sum(scaled_phi, psi.choi(), tol).matrix();
  }
  const double step = spectral_norm(current - previous);
  if (step > tol_lim)
    throw NonConvergence("parallel-sum limit still moving: last step " + std::to_string(step) +
                         " exceeds " + std::to_string(tol_lim));
  return with_choi(psi, current);
}

LebesgueSplit decompose(const CpMap& phi, const CpMap& psi, const Tolerances& tol) {
  const RnPair rn = rn_pair(phi, psi, tol);
  const Projection phi_support = unit_interval_support(rn.a_prime, tol.rank_rtol);
  const Matrix& p = phi_support.matrix();
  const Matrix& h = rn.c_half.matrix();
  const PsdMatrix ac_choi = PsdMatrix::trusted(h * (p * rn.b_prime.matrix() * p) * h);

  const Spectrum rest = eigh(HermitianMatrix(psi.choi().matrix() - ac_choi.matrix()));
  const double floor = -scaled(tol.psd, psi.choi().norm());
  if (rest.values(0) < floor)
    throw NumericalError("singular part has eigenvalue " + std::to_string(rest.values(0)) +
                         " below the PSD tolerance");
  const RealVector clamped = rest.values.cwiseMax(0.0);
  const Matrix sing_choi = rest.vectors * clamped.asDiagonal() * rest.vectors.adjoint();

  ExtendedReal alpha_min = ExtendedReal::finite(0.0);
  const double ac_norm = ac_choi.norm();
  if (ac_norm > scaled(tol.psd, psi.choi().norm())) {
    const Projection range = support_projection(phi.choi(), tol.rank_rtol);
    const Matrix outside = ac_choi.matrix() - range.matrix() * ac_choi.matrix();
    if (spectral_norm(outside) > tol.recon * ac_norm) {
      alpha_min = ExtendedReal::infinity();
    } else {
      const Matrix r = frac_power_psd(phi.choi(), -0.5, tol.rank_rtol).matrix();
      alpha_min = ExtendedReal::finite(
          std::max(0.0, PsdMatrix::trusted(r * ac_choi.matrix() * r).max_eigenvalue()));
    }
  }
  return LebesgueSplit{with_choi(psi, ac_choi.matrix()), with_choi(psi, sing_choi), phi_support,
                       alpha_min};
}

bool is_singular(const CpMap& phi, const CpMap& psi, double tol, const Tolerances& tols) {
  require_same_shape(phi, psi, "is_singular");
  const double scale = std::max({1.0, phi.choi().norm(), psi.choi().norm()});
  return parallel_sum(phi.choi(), psi.choi(), tols).norm() <= tol * scale;
}

bool is_singular_rn(const CpMap& phi, const CpMap& psi, double tol, const Tolerances& tols) {
  const RnPair rn = rn_pair(phi, psi, tols);
  const Projection pa = unit_interval_support(rn.a_prime, tols.rank_rtol);
  const Projection pb = unit_interval_support(rn.b_prime, tols.rank_rtol);
  return spectral_norm(pa.matrix() * pb.matrix()) <= tol;
}

bool is_abs_continuous(const CpMap& psi, const CpMap& phi, double tol, const Tolerances& tols) {
  const CpMap ac = ac_part(phi, psi, tols);
  return spectral_norm(psi.choi().matrix() - ac.choi().matrix()) <=
         tol * std::max(1.0, psi.choi().norm());
}

bool is_abs_continuous_rn(const CpMap& psi, const CpMap& phi, double tol, const Tolerances& tols) {
  const RnPair rn = rn_pair(phi, psi, tols);
  const Projection pa = unit_interval_support(rn.a_prime, tols.rank_rtol);
  const Projection pb = unit_interval_support(rn.b_prime, tols.rank_rtol);
  const Index n = pa.dim();
  return spectral_norm((Matrix::Identity(n, n) - pa.matrix()) * pb.matrix()) <= tol;
}

}  // namespace cpmean
