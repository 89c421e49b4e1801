#include <gtest/gtest.h>

#include <random>

#include "lgstab/assembly.hpp"
#include "lgstab/characteristics.hpp"
#include "lgstab/clipping.hpp"
#include "lgstab/errors.hpp"
#include "lgstab/quadrature.hpp"
#include "support/oracles.hpp"

using namespace lgstab;

namespace {

struct Setup {
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const FeSpace> p1, vel;
};

Setup make(int n, int k = 2, MeshPattern pattern = MeshPattern::crisscross) {
  auto m = oracle::square(n, pattern);
  return {m, std::make_shared<const FeSpace>(m, 1), std::make_shared<const FeSpace>(m, k)};
}

Field polynomial_velocity(std::shared_ptr<const FeSpace> s, std::mt19937& rng) {
  const auto p = oracle::Poly2::random(s->degree(), rng), q = oracle::Poly2::random(s->degree(), rng);
  return lagrange_interpolate(s, VectorFunction([p, q](const Point& x) { return Point(p(x), q(x)); }));
}

// Integral of (u o X)(x) phi_i(x) over each element with X evaluated
// directly from w*, no clipping and no point location.
Eigen::VectorXd direct_composite(const Field& w, double dt, const VectorFunction& u,
                                 const FeSpace& test, int degree) {
  const Mesh& m = test.mesh();
  const int n = test.num_dofs();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * n);
  std::array<double, kMaxLocalDofs> phi{};
  for (int e = 0; e < m.num_elements(); ++e) {
    const auto& t = m.element(e);
    const auto dofs = test.element_dofs(e);
    for (const auto& q : triangle_rule(degree)) {
      const Point x = q.bary[0] * m.vertex(t[0]) + q.bary[1] * m.vertex(t[1]) + q.bary[2] * m.vertex(t[2]);
      const Point ux = u(x - dt * w.vector_value(e, q.bary));
      shape_values(test.degree(), q.bary, phi);
      for (int i = 0; i < test.dofs_per_element(); ++i)
        for (int c = 0; c < 2; ++c) out[c * n + dofs[i]] += m.area(e) * q.weight * ux[c] * phi[i];
    }
  }
  return out;
}

}  // namespace

TEST(CharMap, IdentityWhenConvectionVanishes) {
  auto s = make(4);
  const CharMap cm(Field(s.p1, 2), 0.1);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const Point x(u(rng), u(rng));
    EXPECT_EQ(cm.map_point(x), x);
  }
  const auto jb = cm.jacobian_bounds();
  EXPECT_EQ(jb.min_det, 1.0);
  EXPECT_EQ(jb.max_det, 1.0);
  EXPECT_TRUE(jb.condition_ok);
}

TEST(CharMap, ConstantInteriorVelocity) {
  auto s = make(4);
  Field w(s.p1, 2);
  for (int v = 0; v < s.mesh->num_vertices(); ++v)
    if (!s.mesh->is_boundary_vertex(v)) w.coeff(0, v) = 0.5;
  const CharMap cm(w, 0.1);
  int tested = 0;
  for (int e = 0; e < s.mesh->num_elements(); ++e) {
    bool interior = true;
    for (int v : s.mesh->element(e)) interior = interior && !s.mesh->is_boundary_vertex(v);
    if (!interior) continue;
    const Point x = s.mesh->centroid(e);
    EXPECT_LT((cm.map_point(x) - (x - Point(0.05, 0.0))).norm(), 1e-15);
    ++tested;
  }
  EXPECT_GT(tested, 0);
}

TEST(CharMap, MapPointMatchesIndependentEvaluation) {
  auto s = make(8);
  std::mt19937 rng(2);
  const double dt = 0.01;
  const Field w = oracle::random_convection(s.p1, dt, 0.2, rng);
  const CharMap cm(w, dt);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Point x(u(rng), u(rng));
    const Point ref = x - dt * w.vector_value_at(x);
    EXPECT_LT((cm.map_point(x) - ref).norm(), 1e-14);
    const int e = s.mesh->locate(x).element;
    EXPECT_LT((cm.map_point(e, x) - (cm.matrix(e) * x + cm.offset(e))).norm(), 1e-14);
  }
}

TEST(CharMap, RejectsBadConvection) {
  auto s = make(3);
  Field w(s.p1, 2);
  w.coeff(0, 0) = 1.0;  // vertex 0 is a corner
  ASSERT_TRUE(s.p1->is_dirichlet(0));
  EXPECT_THROW(CharMap(w, 0.1), InvalidArgument);
  EXPECT_THROW(CharMap(Field(s.vel, 2), 0.1), InvalidArgument);
  EXPECT_THROW(CharMap(Field(s.p1, 2), 0.0), InvalidArgument);
}

TEST(CharMap, JacobianBounds) {
  auto s = make(6);
  std::mt19937 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const double dt = 0.05;
    const CharMap ok(oracle::random_convection(s.p1, dt, 0.25, rng), dt);
    const auto jb = ok.jacobian_bounds();
    EXPECT_TRUE(jb.condition_ok);
    EXPECT_NEAR(jb.step_number, 0.25, 1e-12);
    EXPECT_GE(jb.min_det, 0.5);
    EXPECT_LE(jb.max_det, 1.5);

    const CharMap bad(oracle::random_convection(s.p1, dt, 0.4, rng), dt);
    const auto jb2 = bad.jacobian_bounds();
    EXPECT_FALSE(jb2.condition_ok);
    double lo = 1e300, hi = -1e300;
    for (int e = 0; e < s.mesh->num_elements(); ++e) {
      lo = std::min(lo, bad.matrix(e).determinant());
      hi = std::max(hi, bad.matrix(e).determinant());
    }
    EXPECT_NEAR(jb2.min_det, lo, 1e-14);
    EXPECT_NEAR(jb2.max_det, hi, 1e-14);
  }
}

TEST(Composite, ZeroConvectionGivesMassProduct) {
  for (int k : {1, 2}) {
    auto s = make(4, k);
    std::mt19937 rng(4);
    const Field u = oracle::random_field(s.vel, 2, rng);
    const CharMap cm(Field(s.p1, 2), 0.1);
    const auto mass = assemble_mass(*s.vel);
    const int n = s.vel->num_dofs();
    for (auto mode : {CompositeMode::exact, CompositeMode::quadrature}) {
      const Eigen::VectorXd got = composite_load_vector(cm, u, *s.vel, mode);
      for (int c = 0; c < 2; ++c) {
        const Eigen::VectorXd ref = mass.multiply(u.coefficients().segment(c * n, n));
        EXPECT_LT((got.segment(c * n, n) - ref).cwiseAbs().maxCoeff(), 1e-14);
      }
    }
  }
}

TEST(Composite, ConstantFieldGivesIntegrals) {
  auto s = make(5);
  std::mt19937 rng(5);
  const double dt = 0.02;
  const CharMap cm(oracle::random_convection(s.p1, dt, 0.2, rng), dt);
  const Field u = lagrange_interpolate(s.vel, VectorFunction([](const Point&) { return Point(1.5, -2.0); }));
  const Eigen::VectorXd got = composite_load_vector(cm, u, *s.vel, CompositeMode::exact);
  const Eigen::VectorXd ints = assemble_integrals(*s.vel);
  const int n = s.vel->num_dofs();
  EXPECT_LT((got.head(n) - 1.5 * ints).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((got.tail(n) + 2.0 * ints).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Composite, ExactModeIsExactForPolynomials) {
  std::mt19937 rng(6);
  for (int trial = 0; trial < 6; ++trial) {
    const int k = trial % 2 ? 1 : 2;
    auto s = make(3 + trial, k, trial % 3 ? MeshPattern::crisscross : MeshPattern::alternating_diagonal);
    const double dt = 0.03;
    const Field w = oracle::random_convection(s.p1, dt, 0.2, rng);
    const CharMap cm(w, dt);
    const auto p = oracle::Poly2::random(k, rng), q = oracle::Poly2::random(k, rng);
    const VectorFunction f = [p, q](const Point& x) { return Point(p(x), q(x)); };
    const Field u = lagrange_interpolate(s.vel, f);
    const Eigen::VectorXd exact = composite_load_vector(cm, u, *s.vel, CompositeMode::exact);
    const Eigen::VectorXd quad = composite_load_vector(cm, u, *s.vel, CompositeMode::quadrature);
    const Eigen::VectorXd ref = direct_composite(w, dt, f, *s.vel, 12);
    EXPECT_LT((exact - ref).cwiseAbs().maxCoeff(), 1e-13) << trial;
    EXPECT_LT((quad - ref).cwiseAbs().maxCoeff(), 1e-13) << trial;
  }
}

TEST(Composite, PiecewiseFieldCloseToQuadrature) {
  // u_prev is only piecewise polynomial, so a fixed quadrature rule on K
  // sees kinks of u_prev o X; agreement is limited by that rule.
  auto s = make(2);
  std::mt19937 rng(7);
  const double dt = 0.05;
  const CharMap cm(oracle::random_convection(s.p1, dt, 0.1, rng), dt);
  const Field u = oracle::random_field(s.vel, 2, rng);
  const Eigen::VectorXd exact = composite_load_vector(cm, u, *s.vel, CompositeMode::exact);
  const Eigen::VectorXd quad = composite_load_vector(cm, u, *s.vel, CompositeMode::quadrature);
  const double diff = (exact - quad).cwiseAbs().maxCoeff();
  RecordProperty("max_abs_difference", std::to_string(diff));
  EXPECT_LT(diff, 1e-3);
}

TEST(Composite, PullbackAreasPartitionElements) {
  std::mt19937 rng(8);
  for (auto pattern : {MeshPattern::crisscross, MeshPattern::alternating_diagonal}) {
    auto s = make(7, 2, pattern);
    const double dt = 0.01;
    const CharMap cm(oracle::random_convection(s.p1, dt, 0.25, rng), dt);
    const auto areas = composite_pullback_areas(cm);
    for (int e = 0; e < s.mesh->num_elements(); ++e) EXPECT_NEAR(areas[e], s.mesh->area(e), 1e-12);
  }
}

TEST(Composite, SerialAndParallelAreBitIdentical) {
  auto s = make(6);
  std::mt19937 rng(9);
  const double dt = 0.02;
  const CharMap cm(oracle::random_convection(s.p1, dt, 0.2, rng), dt);
  const Field u = oracle::random_field(s.vel, 2, rng);
  for (auto mode : {CompositeMode::exact, CompositeMode::quadrature}) {
    const Eigen::VectorXd a = composite_load_vector(cm, u, *s.vel, mode, Exec::serial);
    const Eigen::VectorXd b = composite_load_vector(cm, u, *s.vel, mode, Exec::parallel);
    EXPECT_EQ(a, b);
  }
}

TEST(Composite, FoldedMapIsRejected) {
  auto s = make(4);
  std::mt19937 rng(10);
  const double dt = 0.1;
  const CharMap cm(oracle::random_convection(s.p1, dt, 3.0, rng), dt);
  ASSERT_LE(cm.jacobian_bounds().min_det, 0.0);
  const Field u = oracle::random_field(s.vel, 2, rng);
  EXPECT_THROW(composite_load_vector(cm, u, *s.vel), StepConditionViolated);
}

TEST(Clipping, TriangleSquareOverlap) {
  const Polygon t = make_triangle(Point(-0.5, 0.5), Point(0.5, -0.5), Point(0.5, 0.5));
  const Polygon c = clip_to_unit_square(t, 1e-14);
  EXPECT_NEAR(polygon_area(c), 0.25, 1e-15);
  const Polygon d = intersect_triangle(make_triangle(Point(0, 0), Point(1, 0), Point(0, 1)),
                                       {Point(0, 0), Point(1, 0), Point(1, 1)}, 1e-14);
  EXPECT_NEAR(polygon_area(d), 0.25, 1e-15);
  const Polygon none = intersect_triangle(make_triangle(Point(0, 0), Point(1, 0), Point(0, 1)),
                                          {Point(2, 2), Point(3, 2), Point(2, 3)}, 1e-14);
  EXPECT_TRUE(none.empty());
}
