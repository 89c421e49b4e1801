// Experiment runner: one CSV + SVG per case.
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lgstab/errors.hpp"
#include "lgstab/experiment.hpp"

namespace {

int jobs_from_env() {
  const char* v = std::getenv("LGSTAB_JOBS");
  if (!v || !*v) return 1;
  const int n = std::atoi(v);
  return n > 0 ? n : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lagrange-Galerkin Oseen / Navier-Stokes experiment runner"};
  lgstab::ExperimentSpec spec;
  std::vector<std::string> schemes;
  std::vector<int> N;
  double dt = 0, T = 0, cp = 0, delta0 = 0;
  std::string composite = "exact", solver = "direct", out = "out";
  bool ci = false;
  int jobs = 0;

  app.add_option("--case", spec.case_name, "a | b | c | d | ex42 | custom")
      ->check(CLI::IsMember({"a", "b", "c", "d", "ex42", "custom"}));
  app.add_option("--schemes", schemes, "comma list of O_TH, O_PS, NS_TH, NS_PS")->delimiter(',');
  app.add_option("--k", spec.k, "velocity degree")->check(CLI::Range(1, 2));
  app.add_option("--N", N, "comma list of mesh divisions")->delimiter(',');
  auto* dt_opt = app.add_option("--dt", dt, "time step (default h^2)")->check(CLI::PositiveNumber);
  app.add_option("--nu", spec.nus, "comma list of viscosities")->delimiter(',');
  auto* cp_opt = app.add_option("--cp", cp, "pressure amplitude C_p");
  auto* d0_opt = app.add_option("--delta0", delta0, "stabilization weight")->check(CLI::PositiveNumber);
  auto* T_opt = app.add_option("--T", T, "final time")->check(CLI::PositiveNumber);
  app.add_option("--composite", composite)->check(CLI::IsMember({"exact", "quadrature"}));
  app.add_option("--solver", solver)->check(CLI::IsMember({"direct", "krylov"}));
  app.add_option("--out", out, "output directory");
  app.add_flag("--ci", ci, "reduced mesh list 8,11,16,23");
  app.add_flag("--strict", spec.strict, "abort a run on step-condition violation");
  app.add_flag("--timing", spec.timing, "write measured wall_seconds");
  app.add_flag("--verbose", spec.verbose, "per-step log lines");
  app.add_option("--jobs", jobs, "worker threads (default $LGSTAB_JOBS or 1)");
  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& s : schemes) spec.schemes.push_back(lgstab::scheme_from_string(s));
    if (!N.empty()) spec.N_list = N;
    else if (ci) spec.N_list = lgstab::kCiMeshList;
    if (*dt_opt) spec.dt = dt;
    if (*cp_opt) spec.cp = cp;
    if (*d0_opt) spec.delta0 = delta0;
    if (*T_opt) spec.T = T;
    spec.composite = composite == "exact" ? lgstab::CompositeMode::exact : lgstab::CompositeMode::quadrature;
    spec.solver = solver == "direct" ? lgstab::SolverKind::direct : lgstab::SolverKind::krylov;
    spec.out_dir = out;
    spec.jobs = jobs > 0 ? jobs : jobs_from_env();

    const auto result = lgstab::run_case(spec);
    int failed = 0;
    for (const auto& r : result.rows) {
      if (!r.error.empty()) ++failed;
      std::cout << lgstab::csv_row(spec.case_name, r) << '\n';
    }
    std::cout << "wrote " << result.csv.string() << " and " << result.svg.string() << '\n';
    return failed == 0 ? 0 : 3;
  } catch (const lgstab::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
