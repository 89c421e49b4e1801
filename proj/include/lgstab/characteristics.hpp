#pragma once

#include <vector>

#include <Eigen/Core>

#include "lgstab/exec.hpp"
#include "lgstab/fe_space.hpp"

namespace lgstab {

enum class CompositeMode { exact, quadrature };

/// Quadrature degree used by CompositeMode::quadrature.
inline constexpr int kCompositeQuadratureDegree = 12;

struct JacobianBounds {
  double min_det;
  double max_det;
  bool condition_ok;   // dt * |w*|_{1,inf} <= 1/4
  double step_number;  // dt * |w*|_{1,inf}
};

/// Upwind foot-point map x -> x - dt * w*(x) for a piecewise-linear w* that
/// vanishes on the boundary. The map is affine on every element; the
/// per-element matrix I - dt * grad w*, its determinant and inverse are
/// cached.
class CharMap {
 public:
  CharMap(Field w_star, double dt);

  const Field& w_star() const { return w_; }
  double dt() const { return dt_; }
  const Mesh& mesh() const { return w_.space().mesh(); }

  const Eigen::Matrix2d& matrix(int e) const { return affine_[e]; }
  const Eigen::Matrix2d& inverse(int e) const { return inverse_[e]; }
  const Point& offset(int e) const { return offset_[e]; }
  double det(int e) const { return det_[e]; }
  /// Image of local vertex i of element e.
  Point image_vertex(int e, int i) const;

  /// x - dt * w*(x). Images outside the closed square by at most 1e-10 are
  /// clamped; farther images raise StepConditionViolated.
  Point map_point(const Point& x) const;
  Point map_point(int e, const Point& x) const;

  JacobianBounds jacobian_bounds() const;
  double step_number() const { return dt_ * w1inf_; }

 private:
  Field w_;
  double dt_;
  double w1inf_ = 0.0;
  std::vector<Eigen::Matrix2d> affine_;
  std::vector<Eigen::Matrix2d> inverse_;
  std::vector<Point> offset_;
  std::vector<double> det_;
};

/// Entry (c, i) = integral over the domain of (u_prev o X)_c * phi_i, laid out
/// like Field coefficients (component blocks over test_space DOFs).
///
/// exact: X(K) is clipped against every overlapping element, each piece is
/// pulled back to K, fan-triangulated and integrated with a rule exact for
/// the polynomial degree of the integrand.
/// quadrature: degree-12 rule on K with point location of mapped points.
Eigen::VectorXd composite_load_vector(const CharMap& cm, const Field& u_prev,
                                      const FeSpace& test_space,
                                      CompositeMode mode = CompositeMode::exact,
                                      Exec exec = Exec::parallel);

/// Per element, the summed area of the clipped pieces pulled back to K.
/// Equals |K| when X(K) lies in the closed domain.
std::vector<double> composite_pullback_areas(const CharMap& cm);

}  // namespace lgstab
