#include "lgstab/linsolve.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#ifdef LGSTAB_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

#include "lgstab/errors.hpp"

namespace lgstab {

namespace {

#ifdef LGSTAB_HAVE_UMFPACK
using DirectLU = Eigen::UmfPackLU<SparseMatrix>;
constexpr const char* kDirectName = "direct-umfpack";
#else
using DirectLU = Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>>;
constexpr const char* kDirectName = "direct-sparselu";
#endif

using Cholesky = Eigen::SimplicialLLT<SparseMatrix>;

constexpr int kMaxRefinement = 3;
constexpr int kMaxRestarts = 5;

SparseMatrix principal_block(const SparseMatrix& full, int begin, int size) {
  SparseMatrix b = full.block(begin, begin, size, size);
  b.makeCompressed();
  return b;
}

}  // namespace

struct SaddleSolver::Backend {
  SparseMatrix full;
  // direct
  std::unique_ptr<DirectLU> lu;
  // krylov
  Cholesky velocity;
  Cholesky pressure_mass;
  Cholesky pressure_laplace;
  double multiplier_scale = 1.0;

  void apply_pinv(const SaddleSystem& s, const Eigen::VectorXd& r, Eigen::VectorXd& z) const {
    z.resize(r.size());
    const int nf = s.n_free, np = s.n_p, po = s.pressure_offset();
    z.segment(0, nf) = velocity.solve(r.segment(0, nf));
    z.segment(nf, nf) = velocity.solve(r.segment(nf, nf));
    z.segment(po, np) = pressure_inverse(s, r.segment(po, np));
    z[s.multiplier_index()] = r[s.multiplier_index()] * multiplier_scale;
  }

  Eigen::VectorXd pressure_inverse(const SaddleSystem& s, const Eigen::VectorXd& r) const {
    return s.params.nu * pressure_mass.solve(r) + pressure_laplace.solve(r);
  }
};

SaddleSolver::SaddleSolver(const SaddleSystem& system, const Operators* ops, SolverOptions options)
    : system_(&system), ops_(ops), options_(options) {
  LGSTAB_REQUIRE(system.matrix.finalized(), InvalidArgument, "system matrix not finalized");
  LGSTAB_REQUIRE(options.kind == SolverKind::direct || ops != nullptr, InvalidArgument,
                 "Krylov back-end needs the pressure operators");
}

SaddleSolver::~SaddleSolver() = default;
SaddleSolver::SaddleSolver(SaddleSolver&&) noexcept = default;
SaddleSolver& SaddleSolver::operator=(SaddleSolver&&) noexcept = default;

SolveResult SaddleSolver::solve(const Eigen::VectorXd& rhs, bool reuse) {
  const SaddleSystem& s = *system_;
  LGSTAB_REQUIRE(rhs.size() == s.dim(), InvalidArgument, "right-hand side has wrong dimension");
  SolveResult res;
  res.stats.method = options_.kind == SolverKind::direct ? kDirectName : "minres";
  const double bnorm = rhs.norm();
  if (bnorm == 0.0) {
    res.x = Eigen::VectorXd::Zero(s.dim());
    res.stats.reused = backend_ != nullptr;
    return res;
  }

  const bool fresh = !backend_ || !reuse;
  if (fresh) {
    backend_ = std::make_unique<Backend>();
    backend_->full = s.matrix.full();
    ++factorizations_;
    if (options_.kind == SolverKind::direct) {
      backend_->lu = std::make_unique<DirectLU>();
      backend_->lu->compute(backend_->full);
      if (backend_->lu->info() != Eigen::Success)
        throw SolverFailure("sparse LU factorization failed", 1.0);
    } else {
      const auto& p = s.params;
      backend_->velocity.compute(principal_block(backend_->full, 0, s.n_free));
      backend_->pressure_mass.compute(ops_->pressure_mass.full());
      SparseMatrix lap = p.dt * (ops_->pressure_stiffness.full() + ops_->pressure_mass.full());
      if (p.stabilized) lap += p.delta0 * ops_->stabilization->full();
      backend_->pressure_laplace.compute(lap);
      if (backend_->velocity.info() != Eigen::Success ||
          backend_->pressure_mass.info() != Eigen::Success ||
          backend_->pressure_laplace.info() != Eigen::Success)
        throw SolverFailure("preconditioner factorization failed", 1.0);
      const Eigen::VectorXd& m = ops_->pressure_integrals;
      backend_->multiplier_scale = 1.0 / m.dot(backend_->pressure_inverse(s, m));
    }
  }
  res.stats.reused = !fresh;
  Backend& be = *backend_;
  auto residual = [&](const Eigen::VectorXd& x) { return (rhs - be.full * x).eval(); };

  if (options_.kind == SolverKind::direct) {
    res.x = be.lu->solve(rhs);
    Eigen::VectorXd r = residual(res.x);
    for (int k = 0; k < kMaxRefinement && r.norm() > options_.tolerance * bnorm; ++k) {
      res.x += be.lu->solve(r);
      r = residual(res.x);
    }
    res.stats.relative_residual = r.norm() / bnorm;
  } else {
    res.x = Eigen::VectorXd::Zero(s.dim());
    auto apply_a = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = be.full * x; };
    auto apply_p = [&](const Eigen::VectorXd& r, Eigen::VectorXd& z) { be.apply_pinv(s, r, z); };
    int iters = 0;
    double rel = 1.0;
    for (int restart = 0; restart <= kMaxRestarts; ++restart) {
      iters += minres(apply_a, apply_p, rhs, res.x, 1e-2 * options_.tolerance,
                      options_.max_iterations - iters);
      rel = residual(res.x).norm() / bnorm;
      if (rel <= options_.tolerance || iters >= options_.max_iterations) break;
    }
    res.stats.iterations = iters;
    res.stats.relative_residual = rel;
    if (rel > options_.tolerance && iters >= options_.max_iterations)
      throw ConvergenceFailure("MINRES exceeded the iteration limit", rel);
  }
  if (!std::isfinite(res.stats.relative_residual) ||
      res.stats.relative_residual > options_.tolerance)
    throw SolverFailure("saddle-point solve missed the residual tolerance",
                        res.stats.relative_residual);
  return res;
}

SolveResult solve(const SaddleSystem& system, const Eigen::VectorXd& rhs, const Operators* ops,
                  SolverOptions options) {
  SaddleSolver solver(system, ops, options);
  return solver.solve(rhs, false);
}

}  // namespace lgstab
