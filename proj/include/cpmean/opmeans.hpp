#pragma once

// Operator means and Kubo–Ando connections of PSD matrices.

#include <memory>
#include <string>
#include <vector>

#include "cpmean/connection.hpp"
#include "cpmean/hermlinalg.hpp"
#include "cpmean/kernels.hpp"
#include "cpmean/tolerances.hpp"

namespace cpmean {

enum class MeanTag { arith, geo, harm, parallel, power, log, custom };

struct MeanKind {
  MeanTag tag = MeanTag::geo;
  double alpha = 0.5;                        // power only
  std::shared_ptr<const ConnectionRep> rep;  // custom only

  static MeanKind arith() { return of(MeanTag::arith); }
  static MeanKind geo() { return of(MeanTag::geo); }
  static MeanKind harm() { return of(MeanTag::harm); }
  static MeanKind parallel() { return of(MeanTag::parallel); }
  static MeanKind log() { return of(MeanTag::log); }
  /// Throws DomainError unless alpha ∈ [0, 1].
  static MeanKind power(double alpha);
  static MeanKind custom(ConnectionRep rep);

  /// Parses geo | arith | harm | parallel | log | power:<alpha>.
  static MeanKind parse(const std::string& text);
  std::string name() const;

  static MeanKind of(MeanTag t) {
    MeanKind k;
    k.tag = t;
    return k;
  }
};

struct MeanOptions {
  Tolerances tol = kDefaultTolerances;
  int log_nodes = 16;
  Exec exec = Exec::serial;
};

/// tol_mean scaled by max(1, |A|, |B|).
double mean_tolerance(const PsdMatrix& a, const PsdMatrix& b, const Tolerances& tol);

/// A (A+B)^+ B, symmetrized.
PsdMatrix parallel_sum(const PsdMatrix& a, const PsdMatrix& b,
                       const Tolerances& tol = kDefaultTolerances);
PsdMatrix harmonic_mean(const PsdMatrix& a, const PsdMatrix& b,
                        const Tolerances& tol = kDefaultTolerances);
PsdMatrix arithmetic_mean(const PsdMatrix& a, const PsdMatrix& b);

/// A #_α B. Invertible pairs use the closed form
///   A^{1/2} (A^{-1/2} B A^{-1/2})^α A^{1/2}.
/// Otherwise both operands are shorted to S = ran A ∩ ran B, where the
/// shorted operators are invertible, and the closed form is taken there.
/// This is the value of the downward limit (A+εI) #_α (B+εI) as ε ↓ 0.
PsdMatrix power_mean(const PsdMatrix& a, const PsdMatrix& b, double alpha,
                     const Tolerances& tol = kDefaultTolerances);
PsdMatrix geometric_mean(const PsdMatrix& a, const PsdMatrix& b,
                         const Tolerances& tol = kDefaultTolerances);

/// ∫_0^1 A #_s B ds by Gauss–Legendre quadrature.
PsdMatrix log_mean(const PsdMatrix& a, const PsdMatrix& b, const MeanOptions& opts = {});

/// aA + bB + Σ_k w_k (1+λ_k)/λ_k · ((λ_k A) : B).
PsdMatrix connection_apply(const ConnectionRep& rep, const PsdMatrix& a, const PsdMatrix& b,
                           Exec exec = Exec::serial, const Tolerances& tol = kDefaultTolerances);

/// Direct ε-limit: G_k = (A+ε_k I) #_α (B+ε_k I), ε_k = s·4^{-k}, k = 6..16,
/// s = max(1, |A|, |B|); stops once successive iterates differ by at most
/// tol_mean and compresses to supp A ∧ supp B. Throws NonConvergence when the
/// schedule runs out. Kept as a cross-check for power_mean.
PsdMatrix regularized_limit_mean(const PsdMatrix& a, const PsdMatrix& b, double alpha,
                                 const Tolerances& tol = kDefaultTolerances);

PsdMatrix mean(const MeanKind& kind, const PsdMatrix& a, const PsdMatrix& b,
               const MeanOptions& opts = {});

/// mean(kind, as[k], bs[k]) for every k; parallel over pairs when requested.
std::vector<PsdMatrix> batch_mean(const MeanKind& kind, const std::vector<PsdMatrix>& as,
                                  const std::vector<PsdMatrix>& bs, const MeanOptions& opts = {});

}  // namespace cpmean
