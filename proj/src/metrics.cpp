#include "lgstab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lgstab/errors.hpp"
#include "lgstab/quadrature.hpp"
#include "lgstab/scheme.hpp"

namespace lgstab {

namespace {

double ratio(double num, double den) {
  if (den > 0.0) return num / den;
  return num == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
}

Point physical(const Mesh& m, int e, const Bary& l) {
  const auto& t = m.element(e);
  return l[0] * m.vertex(t[0]) + l[1] * m.vertex(t[1]) + l[2] * m.vertex(t[2]);
}

}  // namespace

double integrate(const Mesh& mesh, int degree,
                 const std::function<double(int, const Bary&, const Point&)>& g) {
  const auto rule = triangle_rule(degree);
  double s = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    double se = 0.0;
    for (const auto& q : rule) se += q.weight * g(e, q.bary, physical(mesh, e, q.bary));
    s += mesh.area(e) * se;
  }
  return s;
}

double l2_distance(const Field& a, const Field* b, int degree) {
  LGSTAB_REQUIRE(!b || &a.space().mesh() == &b->space().mesh(), InvalidArgument,
                 "fields live on different meshes");
  const int comps = a.components();
  return std::sqrt(integrate(a.space().mesh(), degree, [&](int e, const Bary& l, const Point&) {
    double s = 0.0;
    for (int c = 0; c < comps; ++c) {
      const double d = a.value(e, l, c) - (b ? b->value(e, l, c) : 0.0);
      s += d * d;
    }
    return s;
  }));
}

double h1_distance(const Field& a, const Field* b, int degree) {
  LGSTAB_REQUIRE(!b || &a.space().mesh() == &b->space().mesh(), InvalidArgument,
                 "fields live on different meshes");
  const int comps = a.components();
  return std::sqrt(integrate(a.space().mesh(), degree, [&](int e, const Bary& l, const Point&) {
    double s = 0.0;
    for (int c = 0; c < comps; ++c) {
      const Point d = a.gradient(e, l, c) - (b ? b->gradient(e, l, c) : Point::Zero());
      s += d.squaredNorm();
    }
    return s;
  }));
}

ErrorAccumulator::ErrorAccumulator(const ProblemDef& problem, double dt, int degree)
    : problem_(&problem), dt_(dt), degree_(degree) {
  LGSTAB_REQUIRE(problem.exact_u && problem.exact_p, InvalidArgument,
                 "relative errors need an exact solution");
}

void ErrorAccumulator::observe(const TrajectoryState& s) {
  const Mesh& mesh = s.u.space().mesh();
  if (!p2_ || &p2_->mesh() != &mesh) {
    p2_ = s.u.space().degree() == 2 ? s.u.space_ptr()
                                    : std::make_shared<FeSpace>(s.u.space().mesh_ptr(), 2);
  }
  const auto& eu = *problem_->exact_u;
  const auto& ep = *problem_->exact_p;
  const double t = s.t;
  Field ref_u = lagrange_interpolate(p2_, VectorFunction([&](const Point& x) { return eu(x, t); }));

  // Differences of finite element fields are piecewise polynomials; this
  // rule integrates their squares exactly.
  constexpr int fe_deg = 4;
  const double ref_L2 = l2_distance(ref_u, nullptr, fe_deg);
  const double err_L2 = l2_distance(ref_u, &s.u, fe_deg);
  r_.trace_L2_u.push_back(err_L2);
  max_ref_L2_u_ = std::max(max_ref_L2_u_, ref_L2);
  max_err_L2_u_ = std::max(max_err_L2_u_, err_L2);
  r_.final_velocity_L2 = l2_distance(s.u, nullptr, fe_deg);

  const bool with_p = s.n > 0;
  const auto rule = triangle_rule(degree_);
  double ex_u = 0, exerr_u = 0, ex_p = 0, exerr_p = 0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    double a = 0, b = 0, c = 0, d = 0;
    for (const auto& q : rule) {
      const Point x = physical(mesh, e, q.bary);
      const Point u = eu(x, t);
      a += q.weight * u.squaredNorm();
      b += q.weight * (u - s.u.vector_value(e, q.bary)).squaredNorm();
      if (with_p) {
        const double p = ep(x, t);
        c += q.weight * p * p;
        d += q.weight * (p - s.p.value(e, q.bary)) * (p - s.p.value(e, q.bary));
      }
    }
    ex_u += mesh.area(e) * a;
    exerr_u += mesh.area(e) * b;
    ex_p += mesh.area(e) * c;
    exerr_p += mesh.area(e) * d;
  }
  max_ex_L2_u_ = std::max(max_ex_L2_u_, std::sqrt(ex_u));
  max_exerr_L2_u_ = std::max(max_exerr_L2_u_, std::sqrt(exerr_u));
  if (!with_p) return;

  const double ref_H1 = h1_distance(ref_u, nullptr, fe_deg);
  const double err_H1 = h1_distance(ref_u, &s.u, fe_deg);
  r_.trace_H1_u.push_back(err_H1);
  sum_ref_H1_u_ += dt_ * ref_H1 * ref_H1;
  sum_err_H1_u_ += dt_ * err_H1 * err_H1;

  Field ref_p = lagrange_interpolate(s.p.space_ptr(),
                                     ScalarFunction([&](const Point& x) { return ep(x, t); }));
  const double refp = l2_distance(ref_p, nullptr, fe_deg);
  const double errp = l2_distance(ref_p, &s.p, fe_deg);
  r_.trace_L2_p.push_back(errp);
  sum_ref_L2_p_ += dt_ * refp * refp;
  sum_err_L2_p_ += dt_ * errp * errp;
  sum_ex_L2_p_ += dt_ * ex_p;
  sum_exerr_L2_p_ += dt_ * exerr_p;
}

ErrorReport ErrorAccumulator::report() const {
  ErrorReport r = r_;
  r.E_linf_L2_u = ratio(max_err_L2_u_, max_ref_L2_u_);
  r.E_l2_H10_u = ratio(std::sqrt(sum_err_H1_u_), std::sqrt(sum_ref_H1_u_));
  r.E_l2_L2_p = ratio(std::sqrt(sum_err_L2_p_), std::sqrt(sum_ref_L2_p_));
  r.E_linf_L2_u_exact = ratio(max_exerr_L2_u_, max_ex_L2_u_);
  r.E_l2_L2_p_exact = ratio(std::sqrt(sum_exerr_L2_p_), std::sqrt(sum_ex_L2_p_));
  return r;
}

ErrorReport relative_errors(std::span<const TrajectoryState> trajectory, const ProblemDef& problem,
                            double dt, int degree) {
  ErrorAccumulator acc(problem, dt, degree);
  for (const auto& s : trajectory) acc.observe(s);
  return acc.report();
}

OrderFit fit_order(std::span<const double> h, std::span<const double> e) {
  LGSTAB_REQUIRE(h.size() == e.size() && h.size() >= 3, InvalidArgument,
                 "order fit needs at least three (h, E) pairs");
  const std::size_t n = h.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    LGSTAB_REQUIRE(h[i] > 0.0 && e[i] > 0.0, InvalidArgument, "order fit needs positive inputs");
    sx += std::log(h[i]);
    sy += std::log(e[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(h[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(e[i]) - my);
  }
  LGSTAB_REQUIRE(sxx > 0.0, InvalidArgument, "order fit needs distinct h values");
  OrderFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::log(e[i]) - (f.intercept + f.slope * std::log(h[i]));
    rss += d * d;
  }
  f.residual = std::sqrt(rss / n);
  return f;
}

}  // namespace lgstab
