#include <gtest/gtest.h>

#include <cmath>

#include "lgstab/quadrature.hpp"

using namespace lgstab;

namespace {

// Integral of x^a y^b over the reference triangle, scaled by its area 1/2.
double monomial_mean(int a, int b) {
  return 2.0 * std::tgamma(a + 1) * std::tgamma(b + 1) / std::tgamma(a + b + 3);
}

}  // namespace

TEST(Quadrature, WeightsSumToOne) {
  for (int d = 0; d <= 40; ++d) {
    double s = 0.0;
    for (const auto& q : triangle_rule(d)) {
      s += q.weight;
      EXPECT_GT(q.weight, 0.0);
      EXPECT_NEAR(q.bary[0] + q.bary[1] + q.bary[2], 1.0, 1e-15);
      for (double l : q.bary) EXPECT_GE(l, 0.0);
    }
    EXPECT_NEAR(s, 1.0, 1e-14) << d;
  }
}

TEST(Quadrature, ExactForMonomials) {
  for (int d : {1, 2, 4, 8, 12, 16}) {
    const auto rule = triangle_rule(d);
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b) {
        double s = 0.0;
        for (const auto& q : rule) s += q.weight * std::pow(q.bary[1], a) * std::pow(q.bary[2], b);
        EXPECT_NEAR(s, monomial_mean(a, b), 1e-14) << d << ' ' << a << ' ' << b;
      }
  }
}

TEST(Quadrature, GaussLegendre) {
  std::vector<double> x, w;
  gauss_legendre_01(5, x, w);
  ASSERT_EQ(x.size(), 5u);
  for (int p = 0; p <= 9; ++p) {
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += w[i] * std::pow(x[i], p);
    EXPECT_NEAR(s, 1.0 / (p + 1), 1e-15);
  }
}
