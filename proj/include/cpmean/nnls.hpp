#pragma once

#include <Eigen/Dense>

namespace cpmean {

struct NnlsResult {
  Eigen::VectorXd x;
  double residual_norm = 0.0;
  int iterations = 0;
};

/// min |A x - b|_2 subject to x >= 0 (Lawson–Hanson active set).
NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iterations = 0);

}  // namespace cpmean
