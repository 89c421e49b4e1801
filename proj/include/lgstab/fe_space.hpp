#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "lgstab/mesh.hpp"

namespace lgstab {

using Bary = std::array<double, 3>;
using ScalarFunction = std::function<double(const Point&)>;
using VectorFunction = std::function<Point(const Point&)>;

inline constexpr int kMaxLocalDofs = 6;

/// Number of local nodes of the degree-k Lagrange triangle (k in {0,1,2}).
constexpr int local_dofs(int degree) { return (degree + 1) * (degree + 2) / 2; }

// Local Lagrange basis in barycentric coordinates. Degree-2 node order:
// vertices 0,1,2, then midpoints of edges (0,1), (1,2), (2,0).
void shape_values(int degree, const Bary& l, std::span<double> out);
void shape_gradients(int degree, const Bary& l, const std::array<Point, 3>& grad_lambda,
                     std::span<Point> out);
/// Second derivatives (constant per element for degree <= 2).
void shape_hessians(int degree, const std::array<Point, 3>& grad_lambda,
                    std::span<Eigen::Matrix2d> out);
Bary local_node_bary(int degree, int node);

/// Degree-k continuous Lagrange space on a mesh.
class FeSpace {
 public:
  FeSpace(std::shared_ptr<const Mesh> mesh, int degree);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  int degree() const { return degree_; }
  int num_dofs() const { return static_cast<int>(nodes_.size()); }
  int dofs_per_element() const { return local_dofs(degree_); }

  std::span<const int> element_dofs(int e) const {
    return {dofs_.data() + static_cast<std::size_t>(e) * dofs_per_element(),
            static_cast<std::size_t>(dofs_per_element())};
  }
  const Point& node(int i) const { return nodes_[i]; }
  bool is_dirichlet(int i) const { return dirichlet_[i]; }
  const std::vector<bool>& dirichlet_mask() const { return dirichlet_; }
  std::array<Point, 3> grad_lambda(int e) const {
    return {mesh_->grad_lambda(e, 0), mesh_->grad_lambda(e, 1), mesh_->grad_lambda(e, 2)};
  }

 private:
  std::shared_ptr<const Mesh> mesh_;
  int degree_;
  std::vector<int> dofs_;
  std::vector<Point> nodes_;
  std::vector<bool> dirichlet_;
};

/// Coefficient vector of a scalar or 2-vector discrete function.
/// Components are stored blockwise: coefficient of component c at DOF i is
/// coefficients[c * num_dofs + i].
class Field {
 public:
  Field(std::shared_ptr<const FeSpace> space, int components);
  Field(std::shared_ptr<const FeSpace> space, int components, Eigen::VectorXd coefficients);

  const FeSpace& space() const { return *space_; }
  const std::shared_ptr<const FeSpace>& space_ptr() const { return space_; }
  int components() const { return components_; }
  Eigen::VectorXd& coefficients() { return coeffs_; }
  const Eigen::VectorXd& coefficients() const { return coeffs_; }

  double& coeff(int comp, int dof) { return coeffs_[comp * space_->num_dofs() + dof]; }
  double coeff(int comp, int dof) const { return coeffs_[comp * space_->num_dofs() + dof]; }

  double value(int e, const Bary& l, int comp = 0) const;
  Point vector_value(int e, const Bary& l) const;
  Point gradient(int e, const Bary& l, int comp = 0) const;
  /// Row c holds the gradient of component c.
  Eigen::Matrix2d jacobian(int e, const Bary& l) const;

  /// Evaluation at a physical point via point location.
  double value_at(const Point& x, int comp = 0) const;
  Point vector_value_at(const Point& x) const;

 private:
  std::shared_ptr<const FeSpace> space_;
  int components_;
  Eigen::VectorXd coeffs_;
};

Field lagrange_interpolate(std::shared_ptr<const FeSpace> space, const ScalarFunction& f);
Field lagrange_interpolate(std::shared_ptr<const FeSpace> space, const VectorFunction& f);

/// Restriction of a vector field to its vertex values, i.e. the P1 nodal
/// interpolant of a P2 field. Degree-1 input is copied.
Field project_p2_to_p1_at_vertices(const Field& v, std::shared_ptr<const FeSpace> p1_space);

/// max over elements of the Frobenius norm of the gradient, sampled at
/// quadrature points (exact for piecewise-linear fields).
double w1inf_seminorm(const Field& v);

}  // namespace lgstab
