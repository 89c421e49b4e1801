#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "lgstab/assembly.hpp"
#include "lgstab/fe_space.hpp"
#include "lgstab/problems.hpp"

namespace lgstab {

struct TrajectoryState;

/// Sum over elements of the degree-`degree` rule applied to g(e, bary, x).
double integrate(const Mesh& mesh, int degree,
                 const std::function<double(int, const Bary&, const Point&)>& g);

/// ||a - b||_0 and |a - b|_1 for fields on (possibly different) spaces of
/// one mesh. A null `b` means zero.
double l2_distance(const Field& a, const Field* b, int degree = kDataQuadratureDegree);
double h1_distance(const Field& a, const Field* b, int degree = kDataQuadratureDegree);

/// Relative errors against Lagrange interpolants of the exact solution.
struct ErrorReport {
  double E_linf_L2_u = 0.0;
  double E_l2_H10_u = 0.0;
  double E_l2_L2_p = 0.0;
  // L2-type norms measured against the exact solution instead of its
  // interpolant.
  double E_linf_L2_u_exact = 0.0;
  double E_l2_L2_p_exact = 0.0;
  double final_velocity_L2 = 0.0;  // ||u_h^{N_T}||_0
  std::vector<double> trace_L2_u;  // ||Pi u^n - u_h^n||_0, n = 0..N_T
  std::vector<double> trace_H1_u;  // n = 1..N_T
  std::vector<double> trace_L2_p;  // n = 1..N_T
};

/// Streaming accumulator: feed states n = 0..N_T in order.
///
/// Velocity is compared with Pi_2 u and pressure with Pi_l p where l is the
/// pressure degree. l^inf runs over n = 0..N_T, l^2 sums over n = 1..N_T.
class ErrorAccumulator {
 public:
  ErrorAccumulator(const ProblemDef& problem, double dt, int degree = kDataQuadratureDegree);
  void observe(const TrajectoryState& state);
  ErrorReport report() const;

 private:
  const ProblemDef* problem_;
  double dt_;
  int degree_;
  std::shared_ptr<const FeSpace> p2_;
  ErrorReport r_;
  double max_ref_L2_u_ = 0.0, max_err_L2_u_ = 0.0;
  double sum_ref_H1_u_ = 0.0, sum_err_H1_u_ = 0.0;
  double sum_ref_L2_p_ = 0.0, sum_err_L2_p_ = 0.0;
  double max_ex_L2_u_ = 0.0, max_exerr_L2_u_ = 0.0;
  double sum_ex_L2_p_ = 0.0, sum_exerr_L2_p_ = 0.0;
};

ErrorReport relative_errors(std::span<const TrajectoryState> trajectory, const ProblemDef& problem,
                            double dt, int degree = kDataQuadratureDegree);

struct OrderFit {
  double slope;
  double intercept;  // log E = intercept + slope log h
  double residual;   // RMS of the log-log fit residuals
};

/// Least-squares slope of log E against log h (at least 3 positive pairs).
OrderFit fit_order(std::span<const double> h, std::span<const double> e);

}  // namespace lgstab
