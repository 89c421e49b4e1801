#include "lgstab/fe_space.hpp"

#include <cmath>

#include "lgstab/errors.hpp"
#include "lgstab/quadrature.hpp"

namespace lgstab {

void shape_values(int degree, const Bary& l, std::span<double> out) {
  switch (degree) {
    case 0:
      out[0] = 1.0;
      return;
    case 1:
      out[0] = l[0];
      out[1] = l[1];
      out[2] = l[2];
      return;
    case 2:
      out[0] = l[0] * (2.0 * l[0] - 1.0);
      out[1] = l[1] * (2.0 * l[1] - 1.0);
      out[2] = l[2] * (2.0 * l[2] - 1.0);
      out[3] = 4.0 * l[0] * l[1];
      out[4] = 4.0 * l[1] * l[2];
      out[5] = 4.0 * l[2] * l[0];
      return;
    default:
      throw InvalidArgument("unsupported element degree");
  }
}

void shape_gradients(int degree, const Bary& l, const std::array<Point, 3>& g,
                     std::span<Point> out) {
  switch (degree) {
    case 0:
      out[0].setZero();
      return;
    case 1:
      out[0] = g[0];
      out[1] = g[1];
      out[2] = g[2];
      return;
    case 2:
      for (int i = 0; i < 3; ++i) out[i] = (4.0 * l[i] - 1.0) * g[i];
      out[3] = 4.0 * (l[0] * g[1] + l[1] * g[0]);
      out[4] = 4.0 * (l[1] * g[2] + l[2] * g[1]);
      out[5] = 4.0 * (l[2] * g[0] + l[0] * g[2]);
      return;
    default:
      throw InvalidArgument("unsupported element degree");
  }
}

void shape_hessians(int degree, const std::array<Point, 3>& g, std::span<Eigen::Matrix2d> out) {
  const int n = local_dofs(degree);
  if (degree < 2) {
    for (int i = 0; i < n; ++i) out[i].setZero();
    return;
  }
  LGSTAB_REQUIRE(degree == 2, InvalidArgument, "unsupported element degree");
  for (int i = 0; i < 3; ++i) out[i] = 4.0 * g[i] * g[i].transpose();
  auto mixed = [&](int a, int b) {
    return Eigen::Matrix2d(4.0 * (g[a] * g[b].transpose() + g[b] * g[a].transpose()));
  };
  out[3] = mixed(0, 1);
  out[4] = mixed(1, 2);
  out[5] = mixed(2, 0);
}

Bary local_node_bary(int degree, int node) {
  if (degree == 0) return {1.0 / 3, 1.0 / 3, 1.0 / 3};
  if (node < 3) {
    Bary l{0, 0, 0};
    l[node] = 1.0;
    return l;
  }
  Bary l{0, 0, 0};
  l[node - 3] = 0.5;
  l[(node - 2) % 3] = 0.5;
  return l;
}

FeSpace::FeSpace(std::shared_ptr<const Mesh> mesh, int degree)
    : mesh_(std::move(mesh)), degree_(degree) {
  LGSTAB_REQUIRE(mesh_ != nullptr, InvalidArgument, "null mesh");
  LGSTAB_REQUIRE(degree == 1 || degree == 2, InvalidArgument, "degree must be 1 or 2");
  const Mesh& m = *mesh_;
  const int nv = m.num_vertices();
  const int ne = m.num_elements();
  const int nloc = dofs_per_element();

  nodes_.assign(m.vertices().begin(), m.vertices().end());
  dirichlet_.resize(nv);
  for (int v = 0; v < nv; ++v) dirichlet_[v] = m.is_boundary_vertex(v);
  if (degree_ == 2) {
    for (const auto& ed : m.edges()) {
      nodes_.push_back(0.5 * (m.vertex(ed.a) + m.vertex(ed.b)));
      dirichlet_.push_back(ed.count == 1);
    }
  }
  dofs_.resize(static_cast<std::size_t>(ne) * nloc);
  for (int e = 0; e < ne; ++e) {
    int* d = dofs_.data() + static_cast<std::size_t>(e) * nloc;
    const auto& t = m.element(e);
    d[0] = t[0];
    d[1] = t[1];
    d[2] = t[2];
    if (degree_ == 2) {
      for (int j = 0; j < 3; ++j) d[3 + j] = nv + m.element_edge(e, j);
    }
  }
}

Field::Field(std::shared_ptr<const FeSpace> space, int components)
    : space_(std::move(space)), components_(components) {
  LGSTAB_REQUIRE(space_ != nullptr, InvalidArgument, "null space");
  LGSTAB_REQUIRE(components == 1 || components == 2, InvalidArgument,
                 "fields have 1 or 2 components");
  coeffs_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(components_) * space_->num_dofs());
}

Field::Field(std::shared_ptr<const FeSpace> space, int components, Eigen::VectorXd coefficients)
    : Field(std::move(space), components) {
  LGSTAB_REQUIRE(coefficients.size() == coeffs_.size(), InvalidArgument,
                 "coefficient vector length does not match the space");
  coeffs_ = std::move(coefficients);
}

double Field::value(int e, const Bary& l, int comp) const {
  std::array<double, kMaxLocalDofs> phi;
  const int k = space_->degree();
  shape_values(k, l, phi);
  const auto dofs = space_->element_dofs(e);
  const double* c = coeffs_.data() + static_cast<std::size_t>(comp) * space_->num_dofs();
  double s = 0.0;
  for (std::size_t i = 0; i < dofs.size(); ++i) s += c[dofs[i]] * phi[i];
  return s;
}

Point Field::vector_value(int e, const Bary& l) const {
  return Point(value(e, l, 0), value(e, l, 1));
}

Point Field::gradient(int e, const Bary& l, int comp) const {
  std::array<Point, kMaxLocalDofs> grad;
  shape_gradients(space_->degree(), l, space_->grad_lambda(e), grad);
  const auto dofs = space_->element_dofs(e);
  const double* c = coeffs_.data() + static_cast<std::size_t>(comp) * space_->num_dofs();
  Point s = Point::Zero();
  for (std::size_t i = 0; i < dofs.size(); ++i) s += c[dofs[i]] * grad[i];
  return s;
}

Eigen::Matrix2d Field::jacobian(int e, const Bary& l) const {
  Eigen::Matrix2d j;
  j.row(0) = gradient(e, l, 0).transpose();
  j.row(1).setZero();
  if (components_ > 1) j.row(1) = gradient(e, l, 1).transpose();
  return j;
}

double Field::value_at(const Point& x, int comp) const {
  const auto loc = space_->mesh().locate(x);
  return value(loc.element, loc.bary, comp);
}

Point Field::vector_value_at(const Point& x) const {
  const auto loc = space_->mesh().locate(x);
  return vector_value(loc.element, loc.bary);
}

Field lagrange_interpolate(std::shared_ptr<const FeSpace> space, const ScalarFunction& f) {
  Field out(space, 1);
  for (int i = 0; i < space->num_dofs(); ++i) {
    const double v = f(space->node(i));
    LGSTAB_REQUIRE(std::isfinite(v), NumericError, "non-finite value at interpolation node");
    out.coeff(0, i) = v;
  }
  return out;
}

Field lagrange_interpolate(std::shared_ptr<const FeSpace> space, const VectorFunction& f) {
  Field out(space, 2);
  for (int i = 0; i < space->num_dofs(); ++i) {
    const Point v = f(space->node(i));
    LGSTAB_REQUIRE(std::isfinite(v.x()) && std::isfinite(v.y()), NumericError,
                   "non-finite value at interpolation node");
    out.coeff(0, i) = v.x();
    out.coeff(1, i) = v.y();
  }
  return out;
}

Field project_p2_to_p1_at_vertices(const Field& v, std::shared_ptr<const FeSpace> p1_space) {
  LGSTAB_REQUIRE(p1_space && p1_space->degree() == 1, InvalidArgument,
                 "target must be a degree-1 space");
  LGSTAB_REQUIRE(&v.space().mesh() == &p1_space->mesh(), InvalidArgument,
                 "field and target space live on different meshes");
  Field out(p1_space, v.components());
  const int nv = p1_space->num_dofs();
  // Vertex DOFs come first in every space.
  for (int c = 0; c < v.components(); ++c)
    for (int i = 0; i < nv; ++i) out.coeff(c, i) = v.coeff(c, i);
  return out;
}

double w1inf_seminorm(const Field& v) {
  const FeSpace& s = v.space();
  const auto rule = triangle_rule(2 * s.degree());
  double m = 0.0;
  for (int e = 0; e < s.mesh().num_elements(); ++e) {
    if (s.degree() == 1) {
      m = std::max(m, v.jacobian(e, {1.0 / 3, 1.0 / 3, 1.0 / 3}).norm());
      continue;
    }
    for (const auto& q : rule) m = std::max(m, v.jacobian(e, q.bary).norm());
    for (int i = 0; i < s.dofs_per_element(); ++i)
      m = std::max(m, v.jacobian(e, local_node_bary(s.degree(), i)).norm());
  }
  return m;
}

}  // namespace lgstab
