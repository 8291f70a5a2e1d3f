#pragma once

// Completely positive maps M_m -> M_n in Choi form.
//
// Choi convention (0-based): C[(i*n + k), (j*n + l)] = Φ(e_ij)[k, l].
// A Kraus operator K (n x m) contributes vec(K) vec(K)* with
// vec(K)[i*n + k] = K(k, i).

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "cpmean/hermlinalg.hpp"
#include "cpmean/opmeans.hpp"
#include "cpmean/tolerances.hpp"

namespace cpmean {

class CpMap {
 public:
  /// Validates shape, Hermiticity (tol.herm) and positivity (tol.psd);
  /// a non-PSD Choi matrix raises NotCompletelyPositive.
  static CpMap from_choi(Index dim_in, Index dim_out, const Matrix& choi,
                         const Tolerances& tol = kDefaultTolerances);
  /// Kraus operators are dim_out x dim_in; an empty list gives the zero map.
  static CpMap from_kraus(Index dim_in, Index dim_out, std::vector<Matrix> kraus);
  /// For Choi matrices that are PSD by construction.
  static CpMap trusted(Index dim_in, Index dim_out, PsdMatrix choi);

  Index dim_in() const { return dim_in_; }
  Index dim_out() const { return dim_out_; }
  const PsdMatrix& choi() const { return choi_; }
  const std::optional<std::vector<Matrix>>& kraus() const { return kraus_; }

 private:
  CpMap(Index dim_in, Index dim_out, PsdMatrix choi, std::optional<std::vector<Matrix>> kraus);

  Index dim_in_;
  Index dim_out_;
  PsdMatrix choi_;
  std::optional<std::vector<Matrix>> kraus_;
};

Vector vec(const Matrix& k);
Matrix unvec(const Vector& v, Index dim_in, Index dim_out);

/// Assembles the Choi matrix from the images of the matrix units e_ij.
/// Throws NotCompletelyPositive if the result fails the PSD test.
CpMap choi_from_action(Index dim_in, Index dim_out,
                       const std::function<Matrix(Index i, Index j)>& action,
                       const Tolerances& tol = kDefaultTolerances);

/// One Kraus operator √λ·unvec(v) per Choi eigenpair above the rank cutoff.
std::vector<Matrix> kraus_decompose(const CpMap& map, double rank_rtol = kDefaultTolerances.rank_rtol);
Matrix choi_from_kraus(const std::vector<Matrix>& kraus, Index dim_in, Index dim_out);

/// Φ(X)[k,l] = Σ_ij X[i,j] C[(i n + k), (j n + l)].
Matrix apply_map(const CpMap& map, const Matrix& x);

CpMap scale(const CpMap& map, double c);
CpMap add(const CpMap& a, const CpMap& b);

/// Φ ≤cp Ψ, i.e. C_Ψ - C_Φ >= 0 within tol_psd.
bool leq_cp(const CpMap& phi, const CpMap& psi, double tol_psd = kDefaultTolerances.psd);

enum class CpOrder { equal, less, greater, incomparable };
CpOrder compare_cp(const CpMap& phi, const CpMap& psi, double tol_psd = kDefaultTolerances.psd);
const char* to_string(CpOrder order);

CpMap mean_cp(const MeanKind& kind, const CpMap& phi, const CpMap& psi,
              const MeanOptions& opts = {});

/// PSD status of [[C_Φ, C_Θ], [C_Θ, C_Ψ]].
bool geo_certificate(const CpMap& phi, const CpMap& psi, const CpMap& theta,
                     double tol_psd = kDefaultTolerances.psd);

/// Reorders kron(C_1, C_2), whose legs are (in1, out1, in2, out2), into the
/// Choi convention of the tensor product map with legs (in1, in2, out1, out2).
Matrix permute_tensor_legs(const Matrix& kron_choi, Index in1, Index out1, Index in2, Index out2);

CpMap tensor(const CpMap& phi1, const CpMap& phi2);
/// outer ∘ inner.
CpMap compose(const CpMap& outer, const CpMap& inner);

/// Non-negative real or +∞.
class ExtendedReal {
 public:
  static ExtendedReal finite(double v) { return ExtendedReal(v, false); }
  static ExtendedReal infinity() { return ExtendedReal(0.0, true); }
  bool is_finite() const { return !infinite_; }
  /// Throws std::logic_error when infinite.
  double value() const;
  double as_double() const { return infinite_ ? std::numeric_limits<double>::infinity() : value_; }

 private:
  ExtendedReal(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_;
  bool infinite_;
};

/// inf{λ > 0 : λΦ - id ≥cp 0} = ⟨v, C⁺ v⟩ with v = Σ e_i ⊗ e_i, or +∞ when
/// v leaves the range of C (relative residual above 1e-8).
ExtendedReal index_cp(const CpMap& map, const Tolerances& tol = kDefaultTolerances);

struct ChannelFlags {
  bool is_cp = false;
  bool is_unital = false;
  bool is_trace_preserving = false;
  double tolerance = 1e-8;
  double unital_residual = 0.0;  // |Φ(1) - 1|
  double trace_residual = 0.0;   // |Tr_out C - 1|
  double min_choi_eigenvalue = 0.0;
};

ChannelFlags channel_flags(const CpMap& map, double tolerance = 1e-8,
                           double tol_psd = kDefaultTolerances.psd);

}  // namespace cpmean
