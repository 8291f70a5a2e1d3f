#pragma once

// Concrete CP maps and positive functionals used by the examples and tests.

#include <vector>

#include "cpmean/cpmaps.hpp"

namespace cpmean {

CpMap identity_map(Index d);
/// x -> Tr(x)/d · 1, Choi I/d.
CpMap depolarizing(Index d);
/// x -> K x K* for any K (dim_out x dim_in).
CpMap conjugation(const Matrix& k);
/// x -> U x U*; DomainError unless U is unitary within 1e-8.
CpMap unitary_conj(const Matrix& u);
/// x -> A ∘ x (entrywise). CP exactly when A >= 0; DomainError otherwise.
CpMap schur(const Matrix& a, const Tolerances& tol = kDefaultTolerances);
/// Projection of M_d onto its diagonal.
CpMap cond_exp_diag(Index d);
/// x -> u E(u* x u) u* with u the plane rotation by θ and E the diagonal
/// conditional expectation on M_2.
CpMap cond_exp_rotated(double theta);
/// Conditional expectation of M_n ⊗ M_n onto one tensor factor, slicing the
/// other with the diagonal state of the given positive weights:
///   factor 1: x1 ⊗ x2 -> x1 ⊗ (Σ w_p (x2)_pp) 1
///   factor 2: x1 ⊗ x2 -> (Σ w_p (x1)_pp) 1 ⊗ x2
CpMap cond_exp_tensor(int factor, const std::vector<double>& weights);
/// Map C -> M_n, z -> zA.
CpMap scalar_embedding(const Matrix& a, const Tolerances& tol = kDefaultTolerances);

/// Positive functional x -> Tr(ρx).
struct DensityFunctional {
  PsdMatrix rho;
  Index dim() const { return rho.dim(); }
};

/// Choi matrix ρᵀ, as a map M_n -> C.
CpMap functional(const DensityFunctional& f);

struct StateMeanQuantities {
  double gm_trace = 0.0;    // Tr(ρ # σ)
  double sqrt_trace = 0.0;  // Tr(ρ^{1/2} σ^{1/2})
  double fidelity = 0.0;    // Tr |ρ^{1/2} σ^{1/2}| = Tr √(ρ^{1/2} σ ρ^{1/2})
};

StateMeanQuantities state_mean_quantities(const DensityFunctional& rho,
                                          const DensityFunctional& sigma,
                                          const Tolerances& tol = kDefaultTolerances);

}  // namespace cpmean
