#pragma once

// Lebesgue decomposition Ψ = Ψ_ac + Ψ_s of a CP map relative to Φ, in Choi
// form, with the Radon–Nikodym pair of the dominating map Φ + Ψ.

#include "cpmean/cpmaps.hpp"
#include "cpmean/hermlinalg.hpp"
#include "cpmean/tolerances.hpp"

namespace cpmean {

/// With C = C_Φ + C_Ψ: A' = C^{+1/2} C_Φ C^{+1/2}, B' = C^{+1/2} C_Ψ C^{+1/2},
/// so that C^{1/2} A' C^{1/2} = C_Φ and A' + B' = supp C.
struct RnPair {
  PsdMatrix c_half;
  PsdMatrix a_prime;
  PsdMatrix b_prime;
  Projection support;
};

struct LebesgueSplit {
  CpMap ac;
  CpMap sing;
  Projection phi_support;  // support of A'
  ExtendedReal alpha_min;  // least α with C_ac <= α C_Φ
};

RnPair rn_pair(const CpMap& phi, const CpMap& psi, const Tolerances& tol = kDefaultTolerances);

/// Choi c_half · (P B' P) · c_half with P the support of A'.
CpMap ac_part(const CpMap& phi, const CpMap& psi, const Tolerances& tol = kDefaultTolerances);

/// Default limit tolerance, tol.lim · max(1, |C_Ψ|).
double limit_tolerance(const CpMap& psi, const Tolerances& tol = kDefaultTolerances);

/// (2^k Φ : Ψ) for k = 1 .. log2(n_max); returns the last iterate. Throws
/// NonConvergence when the last two iterates differ by more than `tol_lim`
/// (spectral norm). A negative tol_lim selects limit_tolerance(psi).
CpMap ac_part_oracle(const CpMap& phi, const CpMap& psi, double n_max, double tol_lim = -1.0,
                     const Tolerances& tol = kDefaultTolerances);

/// ac = ac_part, sing = Ψ - ac with rounding-level negative eigenvalues
/// clamped; NumericalError if sing is negative beyond tol_psd.
LebesgueSplit decompose(const CpMap& phi, const CpMap& psi,
                        const Tolerances& tol = kDefaultTolerances);

/// Φ ⊥ Ψ: |C_Φ : C_Ψ| <= tol.
bool is_singular(const CpMap& phi, const CpMap& psi, double tol = 1e-8,
                 const Tolerances& tols = kDefaultTolerances);
/// Same question via the RN pair: |P'_Φ P'_Ψ| <= tol.
bool is_singular_rn(const CpMap& phi, const CpMap& psi, double tol = 1e-8,
                    const Tolerances& tols = kDefaultTolerances);

/// Ψ ≪ Φ: |C_Ψ - C_ac| <= tol.
bool is_abs_continuous(const CpMap& psi, const CpMap& phi, double tol = 1e-8,
                       const Tolerances& tols = kDefaultTolerances);
/// Same question via the RN pair: supp B' ⊆ supp A'.
bool is_abs_continuous_rn(const CpMap& psi, const CpMap& phi, double tol = 1e-8,
                          const Tolerances& tols = kDefaultTolerances);

}  // namespace cpmean
