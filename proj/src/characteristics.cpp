#include "lgstab/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/LU>

#include "lgstab/clipping.hpp"
#include "lgstab/errors.hpp"
#include "lgstab/quadrature.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lgstab {

namespace {

constexpr double kDetFloor = 1e-12;
constexpr double kSliverFraction = 1e-14;
constexpr double kClipRelTol = 1e-12;

// Barycentric coordinates with respect to an arbitrary counterclockwise
// triangle, precomputed as affine functionals.
struct BaryFrame {
  std::array<Point, 3> grad;
  std::array<Point, 3> anchor;

  explicit BaryFrame(const std::array<Point, 3>& t) {
    const double a2 = (t[1] - t[0]).x() * (t[2] - t[0]).y() - (t[2] - t[0]).x() * (t[1] - t[0]).y();
    for (int i = 0; i < 3; ++i) {
      const Point& pa = t[(i + 1) % 3];
      const Point& pb = t[(i + 2) % 3];
      grad[i] = Point(pa.y() - pb.y(), pb.x() - pa.x()) / a2;
      anchor[i] = pa;
    }
  }
  Bary operator()(const Point& x) const {
    return {grad[0].dot(x - anchor[0]), grad[1].dot(x - anchor[1]), grad[2].dot(x - anchor[2])};
  }
};

std::array<Point, 3> element_points(const Mesh& m, int e) {
  const auto& t = m.element(e);
  return {m.vertex(t[0]), m.vertex(t[1]), m.vertex(t[2])};
}

void check_det(const CharMap& cm, int e) {
  if (cm.det(e) <= kDetFloor) {
    std::ostringstream msg;
    msg << "characteristic map degenerates on element " << e << " (det = " << cm.det(e) << ")";
    throw StepConditionViolated(msg.str());
  }
}

// Scratch space for one element's contribution.
struct Workspace {
  std::vector<int> candidates;
};

template <typename Sink>
void for_each_piece(const CharMap& cm, int e, Workspace& ws, Sink&& sink) {
  const Mesh& m = cm.mesh();
  check_det(cm, e);
  const std::array<Point, 3> img{cm.image_vertex(e, 0), cm.image_vertex(e, 1),
                                 cm.image_vertex(e, 2)};
  const double tol = kClipRelTol * m.diameter(e);
  Polygon image = clip_to_unit_square(make_triangle(img[0], img[1], img[2]), tol);
  if (image.empty()) return;
  const double image_area = cm.det(e) * m.area(e);
  const BaryFrame frame(img);

  Point lo(1e300, 1e300), hi(-1e300, -1e300);
  for (int i = 0; i < image.n; ++i) {
    lo = lo.cwiseMin(image.v[i]);
    hi = hi.cwiseMax(image.v[i]);
  }
  ws.candidates.clear();
  m.candidates(lo, hi, ws.candidates);

  for (int target : ws.candidates) {
    const auto tri = element_points(m, target);
    bool inside = true;
    for (int i = 0; i < image.n && inside; ++i) {
      const auto l = m.barycentric(target, image.v[i]);
      inside = std::min({l[0], l[1], l[2]}) >= 0.0;
    }
    const Polygon piece = inside ? image : intersect_triangle(image, tri, tol);
    if (!piece.empty() && polygon_area(piece) >= kSliverFraction * image_area) {
      sink(target, piece, frame);
    }
    if (inside) break;
  }
}

}  // namespace

CharMap::CharMap(Field w_star, double dt) : w_(std::move(w_star)), dt_(dt) {
  LGSTAB_REQUIRE(w_.space().degree() == 1 && w_.components() == 2, InvalidArgument,
                 "w* must be a piecewise-linear vector field");
  LGSTAB_REQUIRE(dt > 0.0, InvalidArgument, "time increment must be positive");
  const FeSpace& s = w_.space();
  for (int i = 0; i < s.num_dofs(); ++i) {
    LGSTAB_REQUIRE(!s.is_dirichlet(i) || (w_.coeff(0, i) == 0.0 && w_.coeff(1, i) == 0.0),
                   InvalidArgument, "w* must vanish on the boundary");
  }
  const Mesh& m = s.mesh();
  const int ne = m.num_elements();
  affine_.resize(ne);
  inverse_.resize(ne);
  offset_.resize(ne);
  det_.resize(ne);
  w1inf_ = 0.0;
  for (int e = 0; e < ne; ++e) {
    const auto& t = m.element(e);
    Eigen::Matrix2d grad = Eigen::Matrix2d::Zero();
    for (int i = 0; i < 3; ++i) {
      const Point wi(w_.coeff(0, t[i]), w_.coeff(1, t[i]));
      grad += wi * m.grad_lambda(e, i).transpose();
    }
    w1inf_ = std::max(w1inf_, grad.norm());
    affine_[e] = Eigen::Matrix2d::Identity() - dt_ * grad;
    det_[e] = affine_[e].determinant();
    inverse_[e] = affine_[e].inverse();
    const Point& p0 = m.vertex(t[0]);
    const Point w0(w_.coeff(0, t[0]), w_.coeff(1, t[0]));
    // X(x) = A x + b with X(p0) = p0 - dt w(p0)
    offset_[e] = p0 - dt_ * w0 - affine_[e] * p0;
  }
}

Point CharMap::image_vertex(int e, int i) const {
  const int v = mesh().element(e)[i];
  return mesh().vertex(v) - dt_ * Point(w_.coeff(0, v), w_.coeff(1, v));
}

Point CharMap::map_point(int e, const Point& x) const {
  Point y = x - dt_ * w_.vector_value(e, mesh().barycentric(e, x));
  constexpr double tol = 1e-10;
  if (y.x() < -tol || y.y() < -tol || y.x() > 1.0 + tol || y.y() > 1.0 + tol) {
    std::ostringstream msg;
    msg << "foot point (" << y.x() << ", " << y.y() << ") leaves the domain";
    throw StepConditionViolated(msg.str());
  }
  y.x() = std::clamp(y.x(), 0.0, 1.0);
  y.y() = std::clamp(y.y(), 0.0, 1.0);
  return y;
}

Point CharMap::map_point(const Point& x) const {
  return map_point(mesh().locate(x).element, x);
}

JacobianBounds CharMap::jacobian_bounds() const {
  JacobianBounds b{1e300, -1e300, false, step_number()};
  for (double d : det_) {
    b.min_det = std::min(b.min_det, d);
    b.max_det = std::max(b.max_det, d);
  }
  b.condition_ok = b.step_number <= 0.25 * (1.0 + 1e-12);
  return b;
}

namespace {

// Local contribution of element e: comps x nloc values, component-major.
void exact_element(const CharMap& cm, const Field& u, const FeSpace& test, int e,
                   Workspace& ws, std::span<double> local) {
  const int kt = test.degree();
  const int ku = u.space().degree();
  const int nt = test.dofs_per_element();
  const int comps = u.components();
  const auto rule = triangle_rule(kt + ku);
  const double inv_det = 1.0 / cm.det(e);
  std::fill(local.begin(), local.end(), 0.0);

  for_each_piece(cm, e, ws, [&](int target, const Polygon& piece, const BaryFrame& frame) {
    const Mesh& m = cm.mesh();
    std::array<Bary, Polygon::kCapacity> mu, nu;
    for (int i = 0; i < piece.n; ++i) {
      mu[i] = frame(piece.v[i]);
      nu[i] = m.barycentric(target, piece.v[i]);
    }
    std::array<double, kMaxLocalDofs> phi;
    for (int j = 1; j + 1 < piece.n; ++j) {
      const Polygon sub = make_triangle(piece.v[0], piece.v[j], piece.v[j + 1]);
      const double w_sub = polygon_area(sub) * inv_det;
      if (w_sub <= 0.0) continue;
      for (const auto& q : rule) {
        Bary lm, ln;
        for (int a = 0; a < 3; ++a) {
          lm[a] = q.bary[0] * mu[0][a] + q.bary[1] * mu[j][a] + q.bary[2] * mu[j + 1][a];
          ln[a] = q.bary[0] * nu[0][a] + q.bary[1] * nu[j][a] + q.bary[2] * nu[j + 1][a];
        }
        shape_values(kt, lm, phi);
        const double w = w_sub * q.weight;
        for (int c = 0; c < comps; ++c) {
          const double uc = w * u.value(target, ln, c);
          for (int i = 0; i < nt; ++i) local[c * nt + i] += uc * phi[i];
        }
      }
    }
  });
}

void quadrature_element(const CharMap& cm, const Field& u, const FeSpace& test, int e,
                        std::span<double> local) {
  const Mesh& m = cm.mesh();
  const int kt = test.degree();
  const int nt = test.dofs_per_element();
  const int comps = u.components();
  check_det(cm, e);
  const auto tri = element_points(m, e);
  std::array<double, kMaxLocalDofs> phi;
  std::fill(local.begin(), local.end(), 0.0);
  for (const auto& q : triangle_rule(kCompositeQuadratureDegree)) {
    const Point y = q.bary[0] * tri[0] + q.bary[1] * tri[1] + q.bary[2] * tri[2];
    const Point x = cm.map_point(e, y);
    const auto loc = m.locate(x, e);
    shape_values(kt, q.bary, phi);
    const double w = m.area(e) * q.weight;
    for (int c = 0; c < comps; ++c) {
      const double uc = w * u.value(loc.element, loc.bary, c);
      for (int i = 0; i < nt; ++i) local[c * nt + i] += uc * phi[i];
    }
  }
}

}  // namespace

Eigen::VectorXd composite_load_vector(const CharMap& cm, const Field& u_prev,
                                      const FeSpace& test_space, CompositeMode mode, Exec exec) {
  const Mesh& m = cm.mesh();
  LGSTAB_REQUIRE(&u_prev.space().mesh() == &m && &test_space.mesh() == &m, InvalidArgument,
                 "characteristic map, field and test space must share one mesh");
  const int ne = m.num_elements();
  const int comps = u_prev.components();
  const int nt = test_space.dofs_per_element();
  const int ndof = test_space.num_dofs();
  const std::size_t stride = static_cast<std::size_t>(comps) * nt;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(comps) * ndof);

  auto element = [&](int e, Workspace& ws, std::span<double> local) {
    if (mode == CompositeMode::exact)
      exact_element(cm, u_prev, test_space, e, ws, local);
    else
      quadrature_element(cm, u_prev, test_space, e, local);
  };
  auto scatter = [&](int e, std::span<const double> local) {
    const auto dofs = test_space.element_dofs(e);
    for (int c = 0; c < comps; ++c)
      for (int i = 0; i < nt; ++i) out[c * ndof + dofs[i]] += local[c * nt + i];
  };

  if (exec == Exec::serial) {
    Workspace ws;
    std::vector<double> local(stride);
    for (int e = 0; e < ne; ++e) {
      element(e, ws, local);
      scatter(e, local);
    }
    return out;
  }

  std::vector<double> buffer(stride * ne);
  std::exception_ptr failure;
#pragma omp parallel
  {
    Workspace ws;
#pragma omp for schedule(dynamic, 64)
    for (int e = 0; e < ne; ++e) {
      try {
        element(e, ws, std::span<double>(buffer.data() + stride * e, stride));
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  for (int e = 0; e < ne; ++e) scatter(e, std::span<const double>(buffer.data() + stride * e, stride));
  return out;
}

std::vector<double> composite_pullback_areas(const CharMap& cm) {
  const Mesh& m = cm.mesh();
  std::vector<double> areas(m.num_elements(), 0.0);
  Workspace ws;
  for (int e = 0; e < m.num_elements(); ++e) {
    const double inv_det = 1.0 / cm.det(e);
    for_each_piece(cm, e, ws, [&](int, const Polygon& piece, const BaryFrame&) {
      areas[e] += polygon_area(piece) * inv_det;
    });
  }
  return areas;
}

}  // namespace lgstab
