#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

namespace esscorr::detail {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Laguerre rule for weight e^{-x} on [0, inf), by Golub-Welsch.
inline GaussRule gauss_laguerre(int n) {
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int i = 0; i < n; ++i) {
    diag(i) = 2.0 * i + 1.0;
    if (i + 1 < n) {
      sub(i) = i + 1.0;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = eig.eigenvalues()(i);
    const double v = eig.eigenvectors()(0, i);
    rule.weights[i] = v * v;
  }
  return rule;
}

}  // namespace esscorr::detail
