#pragma once

#include <array>
#include <span>
#include <vector>

namespace lgstab {

struct QuadPoint {
  std::array<double, 3> bary;
  double weight;  // fraction of the element area; weights sum to 1
};

/// Collapsed (Duffy) Gauss-Legendre rule on a triangle, exact for
/// polynomials of total degree <= `degree`.
std::span<const QuadPoint> triangle_rule(int degree);

/// n-point Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace lgstab
