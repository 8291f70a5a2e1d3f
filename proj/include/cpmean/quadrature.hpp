#pragma once

#include <vector>

namespace cpmean {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss–Jacobi rule for ∫_{-1}^{1} (1-x)^a (1+x)^b g(x) dx, a, b > -1,
/// via Golub–Welsch on the Jacobi matrix. Nodes ascending.
QuadratureRule gauss_jacobi(int n, double a, double b);

/// Gauss–Legendre rule mapped to [0, 1].
QuadratureRule gauss_legendre_unit(int n);

}  // namespace cpmean
