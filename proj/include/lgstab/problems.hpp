#pragma once

#include <functional>
#include <optional>
#include <string>

#include "lgstab/mesh.hpp"

namespace lgstab {

using SpaceTimeVector = std::function<Point(const Point&, double)>;
using SpaceTimeScalar = std::function<double(const Point&, double)>;

enum class ProblemKind { oseen, navier_stokes };

/// Data of a test problem on the unit square.
struct ProblemDef {
  std::string name;
  double T = 1.0;
  SpaceTimeVector forcing;
  std::function<Point(const Point&)> u0;
  std::optional<SpaceTimeVector> exact_u;
  std::optional<SpaceTimeScalar> exact_p;
  std::optional<SpaceTimeVector> w;  // convection field, Oseen only
  double pressure_amplitude = 0.0;
  bool zero_data = false;
};

/// Manufactured solution
///   u1 = phi(x1, x2, t), u2 = -phi(x2, x1, t),
///   p  = Cp sin(pi (x1 + 2 x2) + 1 + t),
///   phi(a, b, t) = -sin(pi a)^2 sin(pi b) [sin(pi (a + t)) + 3 sin(pi (a + 2b + t))]
/// on T = 1. The forcing balances du/dt + (u.grad)u - nu lap u + grad p; the
/// Oseen variant uses w = u.
ProblemDef example41(double pressure_amplitude, double nu, ProblemKind kind);

/// Forced Navier-Stokes problem with f = (0, 10 sin(2 pi x2)), u0 = 0, T = 40.
/// Exact solution u = 0, p = -(5/pi) cos(2 pi x2).
ProblemDef example42();

/// f = 0, u0 = 0, w = 0; the exact solution is zero.
ProblemDef zero_problem(double T = 1.0);

}  // namespace lgstab
