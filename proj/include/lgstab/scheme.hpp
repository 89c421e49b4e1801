#pragma once

#include <functional>
#include <memory>
#include <string>

#include "lgstab/assembly.hpp"
#include "lgstab/characteristics.hpp"
#include "lgstab/fe_space.hpp"
#include "lgstab/linsolve.hpp"
#include "lgstab/mesh.hpp"
#include "lgstab/problems.hpp"

namespace lgstab {

/// O_* solve the Oseen problem with the given convection field; NS_* use the
/// previous velocity iterate. *_TH use P_k/P_{k-1}, *_PS use stabilized
/// P_k/P_k.
enum class Scheme { O_TH, O_PS, NS_TH, NS_PS };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);
constexpr bool is_stabilized(Scheme s) { return s == Scheme::O_PS || s == Scheme::NS_PS; }
constexpr bool is_navier_stokes(Scheme s) { return s == Scheme::NS_TH || s == Scheme::NS_PS; }

struct RunConfig {
  Scheme scheme = Scheme::O_PS;
  int k = 2;
  int N = 16;
  MeshPattern pattern = MeshPattern::crisscross;
  double dt = 1.0 / 256;
  double T = 1.0;
  double nu = 1e-2;
  double delta0 = 0.1;
  CompositeMode composite = CompositeMode::exact;
  SolverOptions solver{};
  bool strict = false;   // step-condition violation aborts the run
  bool verbose = false;  // per-step log lines on std::clog
  int data_degree = kDataQuadratureDegree;
  Exec exec = Exec::parallel;
  std::shared_ptr<const Mesh> mesh;  // overrides N/pattern when set

  int num_steps() const;
  void validate() const;
};

struct StepDiagnostics {
  JacobianBounds jacobian{1.0, 1.0, true, 0.0};
  SolveStats solve;
  double pressure_mean = 0.0;
};

struct TrajectoryState {
  int n;
  double t;
  Field u;
  Field p;
  StepDiagnostics diag;
};

struct RunSummary {
  int steps = 0;
  int factorizations = 0;
  int step_condition_warnings = 0;
  double max_relative_residual = 0.0;
  double max_abs_pressure_mean = 0.0;
  // Extreme determinants over steps where the step condition held.
  double min_det_when_ok = 1.0;
  double max_det_when_ok = 1.0;
};

using StateObserver = std::function<void(const TrajectoryState&)>;

/// Discrete spaces and assembled operators of one configuration.
struct Discretization {
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const FeSpace> velocity;
  std::shared_ptr<const FeSpace> pressure;
  std::shared_ptr<const FeSpace> linear;  // P1, hosts w*
  Operators ops;
  SaddleSystem system;
};

Discretization discretize(const RunConfig& config);

/// Streams states n = 0..N_T to `observer`.
RunSummary run(const RunConfig& config, const ProblemDef& problem, const StateObserver& observer);

struct HypothesisReport {
  double step_number;  // dt * |Pi_1 w0|_{1,inf}
  bool step_condition_ok;
  InternalVertexReport internal_vertex;
  double initial_error;  // ||u_h^0 - u^0||_0
};

HypothesisReport check_hypotheses(const RunConfig& config, const ProblemDef& problem,
                                  const Mesh& mesh, int quadrature_degree = kDataQuadratureDegree);

}  // namespace lgstab
