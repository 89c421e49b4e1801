#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "lgstab/exec.hpp"
#include "lgstab/fe_space.hpp"
#include "lgstab/sparse.hpp"

namespace lgstab {

/// Default quadrature degree for data terms (forcing, error norms).
inline constexpr int kDataQuadratureDegree = 8;

// Element matrices on element e (exact Gauss rules).
Eigen::MatrixXd local_mass(const FeSpace& s, int e);
Eigen::MatrixXd local_stiffness(const FeSpace& s, int e);
/// Rows: pressure nodes. Columns: [x-derivative block | y-derivative block]
/// of velocity nodes. Entry = -(d_c phi_i, psi_j)_K.
Eigen::MatrixXd local_divergence(const FeSpace& vel, const FeSpace& pres, int e);
/// h_K^{2k} sum_{|alpha|=k} (D^alpha psi_i, D^alpha psi_j)_K
Eigen::MatrixXd local_stabilization(const FeSpace& pres, int e);

SparseSymMatrix assemble_mass(const FeSpace& s, Exec exec = Exec::parallel);
/// (grad phi_i, grad phi_j) without the viscosity factor.
SparseSymMatrix assemble_stiffness(const FeSpace& s, Exec exec = Exec::parallel);
/// n_p x 2 n_u matrix of b(v, q) = -(div v, q); column c * n_u + i is
/// component c of velocity DOF i.
SparseMatrix assemble_divergence(const FeSpace& vel, const FeSpace& pres,
                                 Exec exec = Exec::parallel);
SparseSymMatrix assemble_stabilization(const FeSpace& pres, Exec exec = Exec::parallel);
/// m_j = integral of psi_j.
Eigen::VectorXd assemble_integrals(const FeSpace& s);
/// (f, phi_i) per component, laid out like Field coefficients.
Eigen::VectorXd assemble_load(const FeSpace& s, const VectorFunction& f,
                              int degree = kDataQuadratureDegree);

/// Assembled operators for one (velocity, pressure) pair on a mesh.
struct Operators {
  SparseSymMatrix mass;       // velocity scalar mass
  SparseSymMatrix stiffness;  // velocity scalar stiffness
  SparseMatrix divergence;    // B
  std::optional<SparseSymMatrix> stabilization;
  SparseSymMatrix pressure_mass;
  SparseSymMatrix pressure_stiffness;
  Eigen::VectorXd pressure_integrals;
};

Operators assemble_operators(const FeSpace& vel, const FeSpace& pres, bool stabilized,
                             Exec exec = Exec::parallel);

struct SystemParams {
  double nu = 1.0;
  double dt = 1.0;
  bool stabilized = true;
  double delta0 = 0.1;
};

/// Symmetric saddle-point system
///   [ M/dt + nu A   B^T      0 ] [u]
///   [ B            -d0 C     m ] [p]
///   [ 0             m^T      0 ] [l]
/// with homogeneous Dirichlet velocity DOFs removed. Unknown layout:
/// [u_x free | u_y free | p | multiplier].
struct SaddleSystem {
  SystemParams params;
  SparseSymMatrix matrix;
  int n_vel = 0;   // velocity DOFs per component (including boundary)
  int n_free = 0;  // free velocity DOFs per component
  int n_p = 0;
  std::vector<int> free_dofs;  // free index -> velocity DOF
  std::vector<int> free_index; // velocity DOF -> free index or -1

  int dim() const { return 2 * n_free + n_p + 1; }
  int pressure_offset() const { return 2 * n_free; }
  int multiplier_index() const { return 2 * n_free + n_p; }

  /// Velocity coefficients (2 n_vel, zero on the boundary) from a solution.
  Eigen::VectorXd velocity(const Eigen::VectorXd& x) const;
  Eigen::VectorXd pressure(const Eigen::VectorXd& x) const;
};

SaddleSystem build_system(const SystemParams& params, const FeSpace& vel, const FeSpace& pres,
                          const Operators& ops);

/// Velocity entries: forcing_load + composite / dt on free DOFs; pressure and
/// constraint entries zero.
Eigen::VectorXd assemble_rhs(const SaddleSystem& sys, const Eigen::VectorXd& forcing_load,
                             const Eigen::VectorXd& composite);

}  // namespace lgstab
