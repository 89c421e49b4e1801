#include "lgstab/problems.hpp"

#include <cmath>
#include <numbers>

namespace lgstab {

namespace {

constexpr double pi = std::numbers::pi;

// phi and the partial derivatives needed by the momentum equation.
struct PhiJet {
  double v, a, b, t, aa, bb;
};

PhiJet phi_jet(double a, double b, double t) {
  const double sa = std::sin(pi * a), ca = std::cos(pi * a);
  const double sq = sa * sa;
  const double sq_a = 2.0 * pi * sa * ca;
  const double sq_aa = 2.0 * pi * pi * std::cos(2.0 * pi * a);
  const double sb = std::sin(pi * b);
  const double sb_b = pi * std::cos(pi * b);
  const double sb_bb = -pi * pi * sb;
  const double s1 = std::sin(pi * (a + t)), c1 = std::cos(pi * (a + t));
  const double s2 = std::sin(pi * (a + 2.0 * b + t)), c2 = std::cos(pi * (a + 2.0 * b + t));
  const double g = s1 + 3.0 * s2;
  const double g_a = pi * c1 + 3.0 * pi * c2;
  const double g_b = 6.0 * pi * c2;
  const double g_aa = -pi * pi * g;
  const double g_bb = -12.0 * pi * pi * s2;

  PhiJet j;
  j.v = -sq * sb * g;
  j.t = -sq * sb * g_a;  // g_t == g_a
  j.a = -(sq_a * sb * g + sq * sb * g_a);
  j.b = -(sq * sb_b * g + sq * sb * g_b);
  j.aa = -(sq_aa * sb * g + 2.0 * sq_a * sb * g_a + sq * sb * g_aa);
  j.bb = -(sq * sb_bb * g + 2.0 * sq * sb_b * g_b + sq * sb * g_bb);
  return j;
}

double phi(double a, double b, double t) {
  const double sa = std::sin(pi * a);
  return -sa * sa * std::sin(pi * b) * (std::sin(pi * (a + t)) + 3.0 * std::sin(pi * (a + 2.0 * b + t)));
}

}  // namespace

ProblemDef example41(double cp, double nu, ProblemKind kind) {
  ProblemDef p;
  p.name = kind == ProblemKind::oseen ? "example41-oseen" : "example41-ns";
  p.T = 1.0;
  p.pressure_amplitude = cp;
  auto u = [](const Point& x, double t) {
    return Point(phi(x.x(), x.y(), t), -phi(x.y(), x.x(), t));
  };
  p.exact_u = u;
  p.exact_p = [cp](const Point& x, double t) {
    return cp * std::sin(pi * (x.x() + 2.0 * x.y()) + 1.0 + t);
  };
  p.u0 = [u](const Point& x) { return u(x, 0.0); };
  p.forcing = [cp, nu](const Point& x, double t) {
    const PhiJet f = phi_jet(x.x(), x.y(), t);  // u1 = phi(x1, x2)
    const PhiJet s = phi_jet(x.y(), x.x(), t);  // u2 = -phi(x2, x1)
    const double u1 = f.v, u2 = -s.v;
    const double u1_1 = f.a, u1_2 = f.b;
    const double u2_1 = -s.b, u2_2 = -s.a;
    const double lap1 = f.aa + f.bb;
    const double lap2 = -(s.aa + s.bb);
    const double arg = pi * (x.x() + 2.0 * x.y()) + 1.0 + t;
    const double p1 = cp * pi * std::cos(arg);
    const double p2 = 2.0 * cp * pi * std::cos(arg);
    return Point(f.t + u1 * u1_1 + u2 * u1_2 - nu * lap1 + p1,
                 -s.t + u1 * u2_1 + u2 * u2_2 - nu * lap2 + p2);
  };
  if (kind == ProblemKind::oseen) p.w = u;
  return p;
}

ProblemDef example42() {
  ProblemDef p;
  p.name = "example42";
  p.T = 40.0;
  p.forcing = [](const Point& x, double) { return Point(0.0, 10.0 * std::sin(2.0 * pi * x.y())); };
  p.u0 = [](const Point&) { return Point(0.0, 0.0); };
  p.exact_u = [](const Point&, double) { return Point(0.0, 0.0); };
  p.exact_p = [](const Point& x, double) { return -(5.0 / pi) * std::cos(2.0 * pi * x.y()); };
  return p;
}

ProblemDef zero_problem(double T) {
  ProblemDef p;
  p.name = "zero";
  p.T = T;
  p.forcing = [](const Point&, double) { return Point(0.0, 0.0); };
  p.u0 = [](const Point&) { return Point(0.0, 0.0); };
  p.exact_u = [](const Point&, double) { return Point(0.0, 0.0); };
  p.exact_p = [](const Point&, double) { return 0.0; };
  p.w = [](const Point&, double) { return Point(0.0, 0.0); };
  p.zero_data = true;
  return p;
}

}  // namespace lgstab
