#pragma once

#include <memory>
#include <string>

#include <Eigen/Core>

#include "lgstab/assembly.hpp"

namespace lgstab {

enum class SolverKind { direct, krylov };

struct SolverOptions {
  SolverKind kind = SolverKind::direct;
  double tolerance = 1e-10;  // on ||S x - b|| / ||b||
  int max_iterations = 5000;
};

struct SolveStats {
  std::string method;
  int iterations = 0;  // 0 for the direct back-end
  double relative_residual = 0.0;
  bool reused = false;
};

struct SolveResult {
  Eigen::VectorXd x;
  SolveStats stats;
};

/// Solver for a fixed saddle-point system. The factorization (direct) or
/// preconditioner (krylov) is built on the first solve and reused while
/// `reuse` is requested.
class SaddleSolver {
 public:
  /// `ops` supplies pressure-space operators for the Krylov preconditioner
  /// and may be null for the direct back-end.
  SaddleSolver(const SaddleSystem& system, const Operators* ops, SolverOptions options = {});
  ~SaddleSolver();
  SaddleSolver(SaddleSolver&&) noexcept;
  SaddleSolver& operator=(SaddleSolver&&) noexcept;

  SolveResult solve(const Eigen::VectorXd& rhs, bool reuse = true);
  int factorizations() const { return factorizations_; }

 private:
  struct Backend;
  const SaddleSystem* system_;
  const Operators* ops_;
  SolverOptions options_;
  std::unique_ptr<Backend> backend_;
  int factorizations_ = 0;
};

/// One-shot solve.
SolveResult solve(const SaddleSystem& system, const Eigen::VectorXd& rhs,
                  const Operators* ops = nullptr, SolverOptions options = {});

/// Preconditioned MINRES for symmetric A and SPD preconditioner P.
/// `apply_a(x, y)` computes y = A x; `apply_pinv(r, z)` computes z = P^{-1} r.
/// Iterates on x in place; returns the iteration count. Stops when the
/// preconditioned residual estimate drops below `rel_tol` times its start.
template <typename ApplyA, typename ApplyPinv>
int minres(ApplyA&& apply_a, ApplyPinv&& apply_pinv, const Eigen::VectorXd& b,
           Eigen::VectorXd& x, double rel_tol, int max_iter);

}  // namespace lgstab

#include "lgstab/detail/minres.ipp"
