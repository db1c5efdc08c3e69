#pragma once

#include <cmath>
#include <vector>

#include "spherefft/common.hpp"

namespace spherefft {

/// Gauss-Legendre rule on [-1, 1]: integrates polynomials of degree 2n-1
/// exactly. Nodes are found by Newton iteration on P_n from the classical
/// Chebyshev-angle starting guesses; accurate to machine precision for the
/// orders used here (tested up to n = 2000).
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw ContractViolation("gauss_legendre: order must be >= 1, got " + std::to_string(n));
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) {
    rule.nodes[n / 2] = 0.0;
    double p0 = 1.0, p1 = 0.0;
    for (int k = 2; k <= n; ++k) {
      double p2 = -(k - 1.0) * p0 / k;
      p0 = p1;
      p1 = p2;
    }
    rule.weights[n / 2] = 2.0 / (n * n * p0 * p0);
  }
  return rule;
}

}  // namespace spherefft
