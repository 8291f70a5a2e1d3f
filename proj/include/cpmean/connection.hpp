#pragma once

// Löwner representations of operator monotone functions
//   f(t) = a + b t + Σ_k w_k · t(1+λ_k)/(t+λ_k)
// (a discrete measure), with the α-power discretization and the
// transpose / adjoint / dual transforms.

#include <string>
#include <vector>

#include "cpmean/tolerances.hpp"

namespace cpmean {

struct Atom {
  double lambda = 1.0;  // > 0
  double weight = 0.0;  // > 0
};

class ConnectionRep {
 public:
  /// Throws DomainError unless a, b >= 0 and every atom has lambda, weight > 0.
  ConnectionRep(double a, double b, std::vector<Atom> atoms, std::string label = "");

  double a() const { return a_; }
  double b() const { return b_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::string& label() const { return label_; }

  /// Scalar representing function f(t), t >= 0.
  double evaluate(double t) const;

 private:
  double a_;
  double b_;
  std::vector<Atom> atoms_;
  std::string label_;
};

ConnectionRep arithmetic_rep();
ConnectionRep harmonic_rep();

/// Discretizes dμ(λ) = sin(απ)/π · λ^{α-1}/(1+λ) dλ (the measure of t^α) by
/// substituting λ = u/(1-u) and integrating the resulting density
/// u^{α-1}(1-u)^{-α} exactly with a Gauss–Jacobi rule on `nodes` points.
/// Requires α in (0, 1) and nodes >= 4.
ConnectionRep power_rep(double alpha, int nodes);

/// t f(1/t): a and b swap, atoms map λ -> 1/λ with the same weights.
ConnectionRep transpose_rep(const ConnectionRep& rep);

struct RefitOptions {
  double lambda_log10_min = -8.0;
  double lambda_log10_max = 8.0;
  int lambdas_per_decade = 10;
  double fit_log2_min = -8.0;
  double fit_log2_max = 8.0;
  int fit_points = 400;
  double tol = kDefaultTolerances.quad;  // required accuracy on the test grid
};

/// 1 / f(1/t), re-discretized by non-negative least squares over a fixed
/// log-spaced atom dictionary. Throws DomainError if f vanishes on the fit
/// grid and NumericalError if the refit misses `tol` on the test grid.
ConnectionRep adjoint_rep(const ConnectionRep& rep, const RefitOptions& opts = {});

/// t / f(t), realized as transpose(adjoint(rep)).
ConnectionRep dual_rep(const ConnectionRep& rep, const RefitOptions& opts = {});

/// t ∈ {2^-4, 2^-3, ..., 2^4}.
std::vector<double> transform_test_grid();

}  // namespace cpmean
