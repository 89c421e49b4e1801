#include "lgstab/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "lgstab/errors.hpp"

namespace lgstab {

namespace {

constexpr int kMaxDegree = 40;

std::vector<QuadPoint> collapsed_rule(int degree) {
  // The pulled-back integrand has degree degree+1 in the collapsed variable.
  const int n = (degree + 3) / 2;
  std::vector<double> x, w;
  gauss_legendre_01(n, x, w);
  std::vector<QuadPoint> rule;
  rule.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double xi = x[i];
      const double eta = x[j] * (1.0 - x[i]);
      rule.push_back({{1.0 - xi - eta, xi, eta}, 2.0 * w[i] * w[j] * (1.0 - x[i])});
    }
  }
  return rule;
}

struct RuleTable {
  std::array<std::vector<QuadPoint>, kMaxDegree + 1> rules;
  RuleTable() {
    for (int d = 0; d <= kMaxDegree; ++d) rules[d] = collapsed_rule(d);
  }
};

}  // namespace

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  LGSTAB_REQUIRE(n >= 1, InvalidArgument, "Gauss-Legendre order must be positive");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    nodes[i] = 0.5 * (1.0 - z);
    weights[i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
}

std::span<const QuadPoint> triangle_rule(int degree) {
  static const RuleTable table;
  LGSTAB_REQUIRE(degree >= 0 && degree <= kMaxDegree, InvalidArgument,
                 "unsupported quadrature degree");
  return table.rules[degree];
}

}  // namespace lgstab
