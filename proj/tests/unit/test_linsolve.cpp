#include <gtest/gtest.h>

#include <random>

#include "lgstab/assembly.hpp"
#include "lgstab/errors.hpp"
#include "lgstab/linsolve.hpp"
#include "support/oracles.hpp"

using namespace lgstab;

namespace {

struct Problem {
  std::shared_ptr<const FeSpace> vel, pres;
  Operators ops;
  SaddleSystem sys;
};

Problem make(int n, int k, bool stabilized, double nu = 1e-2, double dt = 0.05) {
  auto m = oracle::square(n);
  auto vel = std::make_shared<const FeSpace>(m, k);
  auto pres = std::make_shared<const FeSpace>(m, stabilized ? k : k - 1);
  Operators ops = assemble_operators(*vel, *pres, stabilized);
  SaddleSystem sys = build_system({nu, dt, stabilized, 0.1}, *vel, *pres, ops);
  return {vel, pres, std::move(ops), std::move(sys)};
}

Eigen::VectorXd random_vector(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST(LinSolve, MatchesDenseLu) {
  std::mt19937 rng(1);
  for (auto [k, stab] : {std::pair{1, true}, std::pair{2, true}, std::pair{2, false}}) {
    const Problem p = make(2, k, stab);
    const Eigen::VectorXd b = random_vector(p.sys.dim(), rng);
    const Eigen::MatrixXd dense(p.sys.matrix.full());
    const Eigen::VectorXd ref = dense.fullPivLu().solve(b);
    const auto r = solve(p.sys, b);
    EXPECT_LT((r.x - ref).norm(), 1e-10 * ref.norm()) << k << stab;
    EXPECT_LE(r.stats.relative_residual, 1e-10);
  }
}

TEST(LinSolve, RecoversKnownSolution) {
  std::mt19937 rng(2);
  for (auto kind : {SolverKind::direct, SolverKind::krylov}) {
    for (bool stab : {true, false}) {
      const Problem p = make(5, 2, stab);
      Eigen::VectorXd y = random_vector(p.sys.dim(), rng);
      y[p.sys.multiplier_index()] = 0.0;
      const Eigen::VectorXd b = p.sys.matrix.multiply(y);
      SolverOptions opt;
      opt.kind = kind;
      const auto r = solve(p.sys, b, &p.ops, opt);
      EXPECT_LT((r.x - y).norm(), 1e-8 * y.norm());
      EXPECT_LE(r.stats.relative_residual, 1e-10);
      if (kind == SolverKind::krylov) EXPECT_GT(r.stats.iterations, 0);
    }
  }
}

TEST(LinSolve, SmallViscosityKrylov) {
  std::mt19937 rng(3);
  const Problem p = make(8, 2, true, 1e-6, 1.0 / 64);
  const Eigen::VectorXd b = random_vector(p.sys.dim(), rng);
  const auto direct = solve(p.sys, b);
  SolverOptions opt;
  opt.kind = SolverKind::krylov;
  const auto kry = solve(p.sys, b, &p.ops, opt);
  EXPECT_LT((kry.x - direct.x).norm(), 1e-7 * direct.x.norm());
}

TEST(LinSolve, DirectAndKrylovAgree) {
  std::mt19937 rng(6);
  for (int n : {4, 8, 16}) {
    for (bool stab : {true, false}) {
      const Problem p = make(n, 2, stab, 1e-3, 1.0 / (n * n));
      const Eigen::VectorXd b = random_vector(p.sys.dim(), rng);
      const auto direct = solve(p.sys, b);
      SolverOptions opt;
      opt.kind = SolverKind::krylov;
      const auto kry = solve(p.sys, b, &p.ops, opt);
      EXPECT_LT((kry.x - direct.x).norm(), 1e-9 * direct.x.norm()) << n << stab;
    }
  }
}

TEST(LinSolve, ZeroRhs) {
  const Problem p = make(3, 2, true);
  for (auto kind : {SolverKind::direct, SolverKind::krylov}) {
    SolverOptions opt;
    opt.kind = kind;
    const auto r = solve(p.sys, Eigen::VectorXd::Zero(p.sys.dim()), &p.ops, opt);
    EXPECT_EQ(r.x.norm(), 0.0);
  }
}

TEST(LinSolve, FactorizationReuse) {
  std::mt19937 rng(4);
  const Problem p = make(4, 2, false);
  SaddleSolver s(p.sys, &p.ops);
  for (int i = 0; i < 3; ++i) s.solve(random_vector(p.sys.dim(), rng));
  EXPECT_EQ(s.factorizations(), 1);
  const auto r = s.solve(random_vector(p.sys.dim(), rng), false);
  EXPECT_EQ(s.factorizations(), 2);
  EXPECT_FALSE(r.stats.reused);
}

TEST(LinSolve, IterationCapRaises) {
  std::mt19937 rng(5);
  const Problem p = make(6, 2, true);
  SolverOptions opt;
  opt.kind = SolverKind::krylov;
  opt.max_iterations = 2;
  EXPECT_THROW(solve(p.sys, random_vector(p.sys.dim(), rng), &p.ops, opt), ConvergenceFailure);
}

TEST(LinSolve, DimensionMismatch) {
  const Problem p = make(2, 2, true);
  EXPECT_THROW(solve(p.sys, Eigen::VectorXd::Ones(3)), InvalidArgument);
}
