#pragma once

#include <algorithm>

namespace cpmean {

// Tolerance policy shared by every module. Relative tolerances are scaled by
// max(1, norm) at the point of use.
struct Tolerances {
  double psd = 1e-9;         // smallest eigenvalue >= -psd * max(1, |H|)
  double herm = 1e-10;       // |H - H*| on load
  double recon = 1e-8;       // reconstruction residuals, relative
  double rank_rtol = 1e-10;  // eigenvalue cutoff relative to lambda_max
  double mean = 1e-7;        // operator-mean agreement, relative
  double quad = 1e-6;        // quadrature / connection refits, absolute
  double lim = 1e-6;         // n -> infinity limits, relative to |C_Psi|
};

inline constexpr Tolerances kDefaultTolerances{};

inline double scaled(double tol, double norm) { return tol * std::max(1.0, norm); }

}  // namespace cpmean
