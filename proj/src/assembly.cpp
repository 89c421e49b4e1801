#include "lgstab/assembly.hpp"

#include <cmath>

#include "lgstab/errors.hpp"
#include "lgstab/quadrature.hpp"

namespace lgstab {

namespace {

void require_same_mesh(const FeSpace& a, const FeSpace& b) {
  LGSTAB_REQUIRE(&a.mesh() == &b.mesh(), InvalidArgument, "spaces live on different meshes");
}

// Computes local matrices for all elements (optionally in parallel) and
// merges them in element order.
template <typename Local, typename Merge>
void element_loop(int ne, Exec exec, Local&& local, Merge&& merge) {
  if (exec == Exec::serial) {
    for (int e = 0; e < ne; ++e) merge(e, local(e));
    return;
  }
  std::vector<Eigen::MatrixXd> buf(ne);
#pragma omp parallel for schedule(static)
  for (int e = 0; e < ne; ++e) buf[e] = local(e);
  for (int e = 0; e < ne; ++e) merge(e, buf[e]);
}

template <typename Local>
SparseSymMatrix assemble_symmetric(const FeSpace& s, Exec exec, Local&& local) {
  const int n = s.dofs_per_element();
  SparseSymMatrix out(s.num_dofs());
  out.reserve(static_cast<std::size_t>(s.mesh().num_elements()) * n * (n + 1) / 2);
  element_loop(s.mesh().num_elements(), exec, local, [&](int e, const Eigen::MatrixXd& k) {
    const auto dofs = s.element_dofs(e);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (dofs[i] <= dofs[j]) out.add(dofs[i], dofs[j], k(i, j));
  });
  out.finalize();
  return out;
}

}  // namespace

Eigen::MatrixXd local_mass(const FeSpace& s, int e) {
  const int n = s.dofs_per_element();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  std::array<double, kMaxLocalDofs> phi;
  const double area = s.mesh().area(e);
  for (const auto& q : triangle_rule(2 * s.degree())) {
    shape_values(s.degree(), q.bary, phi);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) k(i, j) += area * q.weight * phi[i] * phi[j];
  }
  return k;
}

Eigen::MatrixXd local_stiffness(const FeSpace& s, int e) {
  const int n = s.dofs_per_element();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  std::array<Point, kMaxLocalDofs> g;
  const auto gl = s.grad_lambda(e);
  const double area = s.mesh().area(e);
  for (const auto& q : triangle_rule(2 * s.degree() - 2)) {
    shape_gradients(s.degree(), q.bary, gl, g);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) k(i, j) += area * q.weight * g[i].dot(g[j]);
  }
  return k;
}

Eigen::MatrixXd local_divergence(const FeSpace& vel, const FeSpace& pres, int e) {
  const int nu = vel.dofs_per_element();
  const int np = pres.dofs_per_element();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(np, 2 * nu);
  std::array<Point, kMaxLocalDofs> g;
  std::array<double, kMaxLocalDofs> psi;
  const auto gl = vel.grad_lambda(e);
  const double area = vel.mesh().area(e);
  for (const auto& q : triangle_rule(vel.degree() - 1 + pres.degree())) {
    shape_gradients(vel.degree(), q.bary, gl, g);
    shape_values(pres.degree(), q.bary, psi);
    const double w = area * q.weight;
    for (int j = 0; j < np; ++j) {
      for (int i = 0; i < nu; ++i) {
        k(j, i) -= w * g[i].x() * psi[j];
        k(j, nu + i) -= w * g[i].y() * psi[j];
      }
    }
  }
  return k;
}

Eigen::MatrixXd local_stabilization(const FeSpace& pres, int e) {
  const int k = pres.degree();
  const double hk = pres.mesh().diameter(e);
  const double scale = std::pow(hk, 2 * k);
  if (k == 1) return scale * local_stiffness(pres, e);
  const int n = pres.dofs_per_element();
  std::array<Eigen::Matrix2d, kMaxLocalDofs> hess;
  shape_hessians(k, pres.grad_lambda(e), hess);
  Eigen::MatrixXd m(n, n);
  const double area = pres.mesh().area(e);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // multi-indices (2,0), (1,1), (0,2), each once
      m(i, j) = scale * area *
                (hess[i](0, 0) * hess[j](0, 0) + hess[i](0, 1) * hess[j](0, 1) +
                 hess[i](1, 1) * hess[j](1, 1));
    }
  }
  return m;
}

SparseSymMatrix assemble_mass(const FeSpace& s, Exec exec) {
  return assemble_symmetric(s, exec, [&](int e) { return local_mass(s, e); });
}

SparseSymMatrix assemble_stiffness(const FeSpace& s, Exec exec) {
  return assemble_symmetric(s, exec, [&](int e) { return local_stiffness(s, e); });
}

SparseSymMatrix assemble_stabilization(const FeSpace& pres, Exec exec) {
  return assemble_symmetric(pres, exec, [&](int e) { return local_stabilization(pres, e); });
}

SparseMatrix assemble_divergence(const FeSpace& vel, const FeSpace& pres, Exec exec) {
  require_same_mesh(vel, pres);
  const int nu = vel.dofs_per_element();
  const int np = pres.dofs_per_element();
  const int nvel = vel.num_dofs();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(vel.mesh().num_elements()) * np * nu * 2);
  element_loop(
      vel.mesh().num_elements(), exec, [&](int e) { return local_divergence(vel, pres, e); },
      [&](int e, const Eigen::MatrixXd& k) {
        const auto vd = vel.element_dofs(e);
        const auto pd = pres.element_dofs(e);
        for (int j = 0; j < np; ++j) {
          for (int i = 0; i < nu; ++i) {
            trip.emplace_back(pd[j], vd[i], k(j, i));
            trip.emplace_back(pd[j], nvel + vd[i], k(j, nu + i));
          }
        }
      });
  SparseMatrix b(pres.num_dofs(), 2 * nvel);
  b.setFromTriplets(trip.begin(), trip.end());
  b.makeCompressed();
  return b;
}

Eigen::VectorXd assemble_integrals(const FeSpace& s) {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(s.num_dofs());
  std::array<double, kMaxLocalDofs> phi;
  const auto rule = triangle_rule(s.degree());
  for (int e = 0; e < s.mesh().num_elements(); ++e) {
    const auto dofs = s.element_dofs(e);
    const double area = s.mesh().area(e);
    for (const auto& q : rule) {
      shape_values(s.degree(), q.bary, phi);
      for (std::size_t i = 0; i < dofs.size(); ++i) m[dofs[i]] += area * q.weight * phi[i];
    }
  }
  return m;
}

Eigen::VectorXd assemble_load(const FeSpace& s, const VectorFunction& f, int degree) {
  const int n = s.num_dofs();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * n);
  std::array<double, kMaxLocalDofs> phi;
  const auto rule = triangle_rule(degree);
  const Mesh& m = s.mesh();
  for (int e = 0; e < m.num_elements(); ++e) {
    const auto dofs = s.element_dofs(e);
    const auto& t = m.element(e);
    const double area = m.area(e);
    for (const auto& q : rule) {
      const Point x = q.bary[0] * m.vertex(t[0]) + q.bary[1] * m.vertex(t[1]) +
                      q.bary[2] * m.vertex(t[2]);
      const Point fx = f(x);
      shape_values(s.degree(), q.bary, phi);
      const double w = area * q.weight;
      for (std::size_t i = 0; i < dofs.size(); ++i) {
        out[dofs[i]] += w * fx.x() * phi[i];
        out[n + dofs[i]] += w * fx.y() * phi[i];
      }
    }
  }
  return out;
}

Operators assemble_operators(const FeSpace& vel, const FeSpace& pres, bool stabilized,
                             Exec exec) {
  require_same_mesh(vel, pres);
  Operators ops{assemble_mass(vel, exec),
                assemble_stiffness(vel, exec),
                assemble_divergence(vel, pres, exec),
                std::nullopt,
                assemble_mass(pres, exec),
                assemble_stiffness(pres, exec),
                assemble_integrals(pres)};
  if (stabilized) ops.stabilization = assemble_stabilization(pres, exec);
  return ops;
}

SaddleSystem build_system(const SystemParams& params, const FeSpace& vel, const FeSpace& pres,
                          const Operators& ops) {
  require_same_mesh(vel, pres);
  LGSTAB_REQUIRE(params.dt > 0.0, InvalidArgument, "time increment must be positive");
  LGSTAB_REQUIRE(params.nu > 0.0, InvalidArgument, "viscosity must be positive");
  if (params.stabilized) {
    LGSTAB_REQUIRE(pres.degree() == vel.degree(), InvalidArgument,
                   "stabilized scheme uses equal-order spaces");
    LGSTAB_REQUIRE(params.delta0 > 0.0, InvalidArgument,
                   "stabilization parameter delta0 must be positive");
    LGSTAB_REQUIRE(ops.stabilization.has_value(), InvalidArgument,
                   "stabilization matrix missing");
  } else {
    LGSTAB_REQUIRE(vel.degree() >= 2, InvalidArgument,
                   "Taylor-Hood pairing requires velocity degree >= 2");
    LGSTAB_REQUIRE(pres.degree() == vel.degree() - 1, InvalidArgument,
                   "Taylor-Hood pressure degree must be velocity degree - 1");
  }

  SaddleSystem sys;
  sys.params = params;
  sys.n_vel = vel.num_dofs();
  sys.n_p = pres.num_dofs();
  sys.free_index.assign(sys.n_vel, -1);
  for (int i = 0; i < sys.n_vel; ++i) {
    if (!vel.is_dirichlet(i)) {
      sys.free_index[i] = static_cast<int>(sys.free_dofs.size());
      sys.free_dofs.push_back(i);
    }
  }
  sys.n_free = static_cast<int>(sys.free_dofs.size());

  SparseSymMatrix s(sys.dim());
  const auto& mass = ops.mass.upper();
  const auto& stiff = ops.stiffness.upper();
  const double inv_dt = 1.0 / params.dt;
  for (int c = 0; c < 2; ++c) {
    const int off = c * sys.n_free;
    for (int col = 0; col < mass.outerSize(); ++col) {
      for (SparseMatrix::InnerIterator it(mass, col); it; ++it) {
        const int i = sys.free_index[it.row()], j = sys.free_index[it.col()];
        if (i >= 0 && j >= 0) s.add(off + i, off + j, inv_dt * it.value());
      }
      for (SparseMatrix::InnerIterator it(stiff, col); it; ++it) {
        const int i = sys.free_index[it.row()], j = sys.free_index[it.col()];
        if (i >= 0 && j >= 0) s.add(off + i, off + j, params.nu * it.value());
      }
    }
  }
  const int po = sys.pressure_offset();
  const auto& b = ops.divergence;
  for (int col = 0; col < b.outerSize(); ++col) {
    const int c = col / sys.n_vel;
    const int fi = sys.free_index[col % sys.n_vel];
    if (fi < 0) continue;
    for (SparseMatrix::InnerIterator it(b, col); it; ++it)
      s.add(c * sys.n_free + fi, po + static_cast<int>(it.row()), it.value());
  }
  if (params.stabilized) {
    const auto& cm = ops.stabilization->upper();
    for (int col = 0; col < cm.outerSize(); ++col)
      for (SparseMatrix::InnerIterator it(cm, col); it; ++it)
        s.add(po + static_cast<int>(it.row()), po + static_cast<int>(it.col()),
              -params.delta0 * it.value());
  }
  for (int j = 0; j < sys.n_p; ++j) s.add(po + j, sys.multiplier_index(), ops.pressure_integrals[j]);
  s.finalize();
  sys.matrix = std::move(s);
  return sys;
}

Eigen::VectorXd SaddleSystem::velocity(const Eigen::VectorXd& x) const {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(2 * n_vel);
  for (int c = 0; c < 2; ++c)
    for (int k = 0; k < n_free; ++k) u[c * n_vel + free_dofs[k]] = x[c * n_free + k];
  return u;
}

Eigen::VectorXd SaddleSystem::pressure(const Eigen::VectorXd& x) const {
  return x.segment(pressure_offset(), n_p);
}

Eigen::VectorXd assemble_rhs(const SaddleSystem& sys, const Eigen::VectorXd& forcing_load,
                             const Eigen::VectorXd& composite) {
  LGSTAB_REQUIRE(forcing_load.size() == 2 * sys.n_vel && composite.size() == 2 * sys.n_vel,
                 InvalidArgument, "right-hand side pieces do not match the velocity space");
  Eigen::VectorXd r = Eigen::VectorXd::Zero(sys.dim());
  const double inv_dt = 1.0 / sys.params.dt;
  for (int c = 0; c < 2; ++c)
    for (int k = 0; k < sys.n_free; ++k) {
      const int i = c * sys.n_vel + sys.free_dofs[k];
      r[c * sys.n_free + k] = forcing_load[i] + inv_dt * composite[i];
    }
  return r;
}

}  // namespace lgstab
