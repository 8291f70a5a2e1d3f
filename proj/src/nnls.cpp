#include "cpmean/nnls.hpp"

#include <limits>
#include <vector>

#include "cpmean/errors.hpp"

namespace cpmean {

namespace {

// Least squares restricted to the passive columns; other entries are zero.
Eigen::VectorXd solve_passive(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                              const std::vector<bool>& passive) {
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    if (passive[j]) cols.push_back(j);
  Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) sub.col(k) = a.col(cols[k]);
  const Eigen::VectorXd zs = sub.colPivHouseholderQr().solve(b);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(a.cols());
  for (std::size_t k = 0; k < cols.size(); ++k) z(cols[k]) = zs(k);
  return z;
}

}  // namespace

NnlsResult nnls(const Eigen::MatrixXd& a_in, const Eigen::VectorXd& b, int max_iterations) {
  if (a_in.rows() != b.size()) throw ShapeError("nnls: row count mismatch");
  const Eigen::Index n = a_in.cols();
  // Unit-norm columns: positive rescaling keeps x >= 0 feasible and stops one
  // large column from setting the dual tolerance for all of them.
  Eigen::VectorXd col_scale = a_in.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < n; ++j)
    if (!(col_scale(j) > 0.0)) col_scale(j) = 1.0;
  const Eigen::MatrixXd a = a_in * col_scale.cwiseInverse().asDiagonal();
  if (max_iterations <= 0) max_iterations = static_cast<int>(3 * n);
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                     a.cwiseAbs().colwise().sum().maxCoeff() *
                     static_cast<double>(std::max(a.rows(), n));

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);
  Eigen::VectorXd w = a.transpose() * (b - a * x);
  int iter = 0;

  while (iter < max_iterations) {
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < n; ++j)
      if (!passive[j] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    if (best < 0) break;
    passive[best] = true;

    Eigen::VectorXd z = solve_passive(a, b, passive);
    while (true) {
      ++iter;
      bool feasible = true;
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[j] && z(j) <= 0.0) {
          feasible = false;
          alpha = std::min(alpha, x(j) / (x(j) - z(j)));
        }
      if (feasible || iter >= max_iterations) break;
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[j] && x(j) <= tol) {
          passive[j] = false;
          x(j) = 0.0;
        }
      z = solve_passive(a, b, passive);
    }
    x = z.cwiseMax(0.0);
    w = a.transpose() * (b - a * x);
  }
  if (iter >= max_iterations) throw NonConvergence("nnls: iteration limit reached");
  const Eigen::VectorXd x_out = x.cwiseQuotient(col_scale);
  return NnlsResult{x_out, (a_in * x_out - b).norm(), iter};
}

}  // namespace cpmean
