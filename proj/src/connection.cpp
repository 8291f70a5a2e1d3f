#include "cpmean/connection.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <utility>

#include "cpmean/errors.hpp"
#include "cpmean/nnls.hpp"
#include "cpmean/quadrature.hpp"

namespace cpmean {

ConnectionRep::ConnectionRep(double a, double b, std::vector<Atom> atoms, std::string label)
    : a_(a), b_(b), atoms_(std::move(atoms)), label_(std::move(label)) {
  if (!(a_ >= 0.0) || !(b_ >= 0.0) || !std::isfinite(a_) || !std::isfinite(b_))
    throw DomainError("connection coefficients a, b must be finite and non-negative");
  for (const Atom& at : atoms_)
    if (!(at.lambda > 0.0) || !(at.weight > 0.0) || !std::isfinite(at.lambda) ||
        !std::isfinite(at.weight))
      throw DomainError("connection atoms need positive finite lambda and weight");
}

double ConnectionRep::evaluate(double t) const {
  double f = a_ + b_ * t;
  for (const Atom& at : atoms_) f += at.weight * t * (1.0 + at.lambda) / (t + at.lambda);
  return f;
}

ConnectionRep arithmetic_rep() { return ConnectionRep(0.5, 0.5, {}, "arith"); }

// 2t/(1+t) is the kernel at λ = 1 with unit weight.
ConnectionRep harmonic_rep() { return ConnectionRep(0.0, 0.0, {{1.0, 1.0}}, "harm"); }

ConnectionRep power_rep(double alpha, int nodes) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("power_rep needs alpha in (0, 1)");
  if (nodes < 4) throw DomainError("power_rep needs at least 4 nodes");
  // With u = (1+x)/2 the density u^{α-1}(1-u)^{-α} du becomes
  // (1+x)^{α-1}(1-x)^{-α} dx; the powers of 2 cancel.
  const QuadratureRule rule = gauss_jacobi(nodes, -alpha, alpha - 1.0);
  const double scale = std::sin(alpha * std::numbers::pi) / std::numbers::pi;
  std::vector<Atom> atoms;
  atoms.reserve(nodes);
  for (int i = 0; i < nodes; ++i) {
    const double u = 0.5 * (1.0 + rule.nodes[i]);
    atoms.push_back({u / (1.0 - u), scale * rule.weights[i]});
  }
  return ConnectionRep(0.0, 0.0, std::move(atoms), "power:" + std::to_string(alpha));
}

ConnectionRep transpose_rep(const ConnectionRep& rep) {
  std::vector<Atom> atoms;
  atoms.reserve(rep.atoms().size());
  for (const Atom& at : rep.atoms()) atoms.push_back({1.0 / at.lambda, at.weight});
  return ConnectionRep(rep.b(), rep.a(), std::move(atoms), rep.label() + "'");
}

std::vector<double> transform_test_grid() {
  std::vector<double> grid;
  for (int k = -4; k <= 4; ++k) grid.push_back(std::ldexp(1.0, k));
  return grid;
}

ConnectionRep adjoint_rep(const ConnectionRep& rep, const RefitOptions& opts) {
  auto target = [&rep](double t) { return 1.0 / rep.evaluate(1.0 / t); };

  std::vector<double> lambdas;
  const int decades_steps = static_cast<int>(
      std::lround((opts.lambda_log10_max - opts.lambda_log10_min) * opts.lambdas_per_decade));
  for (int k = 0; k <= decades_steps; ++k)
    lambdas.push_back(std::pow(10.0, opts.lambda_log10_min +
                                         static_cast<double>(k) / opts.lambdas_per_decade));

  const int m = opts.fit_points;
  const Eigen::Index ncols = 2 + static_cast<Eigen::Index>(lambdas.size());
  Eigen::MatrixXd design(m, ncols);
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) {
    const double t = std::exp2(opts.fit_log2_min +
                               (opts.fit_log2_max - opts.fit_log2_min) * i / (m - 1));
    const double f = rep.evaluate(1.0 / t);
    if (!(f > 0.0) || !std::isfinite(f))
      throw DomainError("adjoint transform: representing function vanishes on the grid");
    const double y = 1.0 / f;
    // Relative least squares: divide each row by the target value.
    design(i, 0) = 1.0 / y;
    design(i, 1) = t / y;
    for (std::size_t k = 0; k < lambdas.size(); ++k)
      design(i, 2 + static_cast<Eigen::Index>(k)) = t * (1.0 + lambdas[k]) / (t + lambdas[k]) / y;
    rhs(i) = 1.0;
  }
  const NnlsResult fit = nnls(design, rhs);

  std::vector<Atom> atoms;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const double w = fit.x(2 + static_cast<Eigen::Index>(k));
    if (w > 0.0) atoms.push_back({lambdas[k], w});
  }
  ConnectionRep out(fit.x(0), fit.x(1), std::move(atoms), rep.label() + "*");

  for (double t : transform_test_grid()) {
    const double err = std::abs(out.evaluate(t) - target(t));
    if (err > opts.tol)
      throw NumericalError("adjoint refit error " + std::to_string(err) + " at t=" +
                           std::to_string(t));
  }
  return out;
}

ConnectionRep dual_rep(const ConnectionRep& rep, const RefitOptions& opts) {
  ConnectionRep d = transpose_rep(adjoint_rep(rep, opts));
  return ConnectionRep(d.a(), d.b(), d.atoms(), rep.label() + "^perp");
}

}  // namespace cpmean
