#include "lgstab/scheme.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "lgstab/errors.hpp"
#include "lgstab/metrics.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lgstab {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::O_TH: return "O_TH";
    case Scheme::O_PS: return "O_PS";
    case Scheme::NS_TH: return "NS_TH";
    case Scheme::NS_PS: return "NS_PS";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "O_TH") return Scheme::O_TH;
  if (s == "O_PS") return Scheme::O_PS;
  if (s == "NS_TH") return Scheme::NS_TH;
  if (s == "NS_PS") return Scheme::NS_PS;
  throw InvalidArgument("unknown scheme '" + s + "'");
}

int RunConfig::num_steps() const {
  // floor(T / dt), guarded against T / dt landing just below an integer
  return static_cast<int>(std::floor(T / dt * (1.0 + 1e-12)));
}

void RunConfig::validate() const {
  LGSTAB_REQUIRE(k == 1 || k == 2, InvalidArgument, "k must be 1 or 2");
  LGSTAB_REQUIRE(dt > 0.0 && T > 0.0, InvalidArgument, "dt and T must be positive");
  LGSTAB_REQUIRE(num_steps() >= 1, InvalidArgument, "T must cover at least one time step");
  LGSTAB_REQUIRE(nu > 0.0 && nu <= 1.0, InvalidArgument, "viscosity must lie in (0, 1]");
  if (is_stabilized(scheme)) {
    LGSTAB_REQUIRE(delta0 > 0.0, InvalidArgument, "delta0 must be positive");
  } else {
    LGSTAB_REQUIRE(k >= 2, InvalidArgument, "Taylor-Hood schemes need k >= 2");
  }
  LGSTAB_REQUIRE(mesh || N >= 2, InvalidArgument, "mesh division N must be at least 2");
}

Discretization discretize(const RunConfig& config) {
  config.validate();
  Discretization d;
  d.mesh = config.mesh ? config.mesh
                       : std::make_shared<const Mesh>(generate_unit_square_mesh(config.N, config.pattern));
  const bool stab = is_stabilized(config.scheme);
  d.velocity = std::make_shared<const FeSpace>(d.mesh, config.k);
  d.pressure = std::make_shared<const FeSpace>(d.mesh, stab ? config.k : config.k - 1);
  d.linear = config.k == 1 ? d.velocity : std::make_shared<const FeSpace>(d.mesh, 1);
  d.ops = assemble_operators(*d.velocity, *d.pressure, stab, config.exec);
  SystemParams params{config.nu, config.dt, stab, config.delta0};
  d.system = build_system(params, *d.velocity, *d.pressure, d.ops);
  return d;
}

namespace {

void zero_boundary(Field& f) {
  for (int i = 0; i < f.space().num_dofs(); ++i)
    if (f.space().is_dirichlet(i))
      for (int c = 0; c < f.components(); ++c) f.coeff(c, i) = 0.0;
}

Field convection_field(const RunConfig& config, const ProblemDef& problem, const Field& u_prev,
                       const std::shared_ptr<const FeSpace>& linear, double t_prev) {
  Field w = [&] {
    if (is_navier_stokes(config.scheme)) return project_p2_to_p1_at_vertices(u_prev, linear);
    LGSTAB_REQUIRE(problem.w.has_value(), InvalidArgument,
                   "Oseen schemes need a convection field");
    const auto& wf = *problem.w;
    return lagrange_interpolate(linear, VectorFunction([&](const Point& x) { return wf(x, t_prev); }));
  }();
  zero_boundary(w);
  return w;
}

}  // namespace

RunSummary run(const RunConfig& config, const ProblemDef& problem, const StateObserver& observer) {
  Discretization d = discretize(config);
  const int steps = config.num_steps();
  const double dt = config.dt;

  SaddleSolver solver(d.system, &d.ops, config.solver);
  RunSummary summary;

  Field u = lagrange_interpolate(d.velocity, VectorFunction(problem.u0));
  zero_boundary(u);
  Field p(d.pressure, 1);
  if (observer) observer(TrajectoryState{0, 0.0, u, p, {}});

  for (int n = 1; n <= steps; ++n) {
    const double t = n * dt;
    StepDiagnostics diag;
    CharMap cm(convection_field(config, problem, u, d.linear, (n - 1) * dt), dt);
    diag.jacobian = cm.jacobian_bounds();
    if (!diag.jacobian.condition_ok) {
      std::ostringstream msg;
      msg << "step " << n << ": dt*|w*|_{1,inf} = " << diag.jacobian.step_number
          << " exceeds 1/4";
      if (config.strict) throw StepConditionViolated(msg.str());
      if (summary.step_condition_warnings == 0 || config.verbose)
        std::clog << "warning: " << msg.str() << '\n';
      ++summary.step_condition_warnings;
    } else {
      summary.min_det_when_ok = std::min(summary.min_det_when_ok, diag.jacobian.min_det);
      summary.max_det_when_ok = std::max(summary.max_det_when_ok, diag.jacobian.max_det);
    }

    Eigen::VectorXd rhs;
    try {
      const Eigen::VectorXd composite =
          composite_load_vector(cm, u, *d.velocity, config.composite, config.exec);
      const auto& f = problem.forcing;
      const Eigen::VectorXd load = assemble_load(
          *d.velocity, VectorFunction([&](const Point& x) { return f(x, t); }), config.data_degree);
      rhs = assemble_rhs(d.system, load, composite);
    } catch (const StepConditionViolated& e) {
      throw StepConditionViolated("step " + std::to_string(n) + ": " + e.what());
    }

    SolveResult sol;
    try {
      sol = solver.solve(rhs, true);
    } catch (const SolverFailure& e) {
      throw SolverFailure("step " + std::to_string(n) + ": " + e.what(), e.residual());
    }
    diag.solve = sol.stats;
    u = Field(d.velocity, 2, d.system.velocity(sol.x));
    p = Field(d.pressure, 1, d.system.pressure(sol.x));
    diag.pressure_mean = d.ops.pressure_integrals.dot(p.coefficients());

    summary.steps = n;
    summary.max_relative_residual = std::max(summary.max_relative_residual, sol.stats.relative_residual);
    summary.max_abs_pressure_mean = std::max(summary.max_abs_pressure_mean, std::abs(diag.pressure_mean));
    if (config.verbose) {
      char buf[256];
      std::snprintf(buf, sizeof buf,
                    "step=%d t=%.6g residual=%.3e det_min=%.6f det_max=%.6f step_number=%.4g "
                    "condition_ok=%d\n",
                    n, t, sol.stats.relative_residual, diag.jacobian.min_det,
                    diag.jacobian.max_det, diag.jacobian.step_number,
                    diag.jacobian.condition_ok ? 1 : 0);
      std::clog << buf;
    }
    if (observer) observer(TrajectoryState{n, t, u, p, diag});
  }
  summary.factorizations = solver.factorizations();
  return summary;
}

HypothesisReport check_hypotheses(const RunConfig& config, const ProblemDef& problem,
                                  const Mesh& mesh, int quadrature_degree) {
  auto shared = std::shared_ptr<const Mesh>(&mesh, [](const Mesh*) {});
  auto linear = std::make_shared<const FeSpace>(shared, 1);
  auto vel = std::make_shared<const FeSpace>(shared, config.k);

  HypothesisReport r{};
  Field w0 = [&] {
    if (!is_navier_stokes(config.scheme) && problem.w) {
      const auto& wf = *problem.w;
      return lagrange_interpolate(linear, VectorFunction([&](const Point& x) { return wf(x, 0.0); }));
    }
    return lagrange_interpolate(linear, VectorFunction(problem.u0));
  }();
  zero_boundary(w0);
  r.step_number = config.dt * w1inf_seminorm(w0);
  r.step_condition_ok = r.step_number <= 0.25 * (1.0 + 1e-12);
  r.internal_vertex = check_internal_vertex_hypothesis(mesh);

  Field uh0 = lagrange_interpolate(vel, VectorFunction(problem.u0));
  zero_boundary(uh0);
  r.initial_error = std::sqrt(integrate(mesh, quadrature_degree, [&](int e, const Bary& l, const Point& x) {
    return (uh0.vector_value(e, l) - problem.u0(x)).squaredNorm();
  }));
  return r;
}

}  // namespace lgstab
