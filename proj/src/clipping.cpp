#include "lgstab/clipping.hpp"

#include <algorithm>
#include <cmath>

namespace lgstab {

Polygon make_triangle(const Point& a, const Point& b, const Point& c) {
  Polygon p;
  p.push(a);
  p.push(b);
  p.push(c);
  return p;
}

Polygon clip_left_of(const Polygon& poly, const Point& a, const Point& b, double tol) {
  Polygon out;
  if (poly.n == 0) return out;
  const Point d = b - a;
  const double len = d.norm();
  auto dist = [&](const Point& x) { return (d.x() * (x.y() - a.y()) - d.y() * (x.x() - a.x())) / len; };

  std::array<double, Polygon::kCapacity> f;
  bool all_in = true;
  for (int i = 0; i < poly.n; ++i) {
    f[i] = dist(poly.v[i]);
    all_in = all_in && f[i] >= -tol;
  }
  if (all_in) return poly;

  for (int i = 0; i < poly.n; ++i) {
    const int j = (i + 1) % poly.n;
    const bool in_i = f[i] >= -tol;
    if (in_i) out.push(poly.v[i]);
    // Only strict crossings produce a new vertex.
    if ((f[i] > tol && f[j] < -tol) || (f[i] < -tol && f[j] > tol)) {
      const double t = f[i] / (f[i] - f[j]);
      out.push(poly.v[i] + t * (poly.v[j] - poly.v[i]));
    }
    if (out.n >= Polygon::kCapacity - 1) break;
  }
  return out;
}

Polygon intersect_triangle(const Polygon& poly, const std::array<Point, 3>& tri, double tol) {
  Polygon p = poly;
  for (int i = 0; i < 3 && !p.empty(); ++i) p = clip_left_of(p, tri[i], tri[(i + 1) % 3], tol);
  return p;
}

Polygon clip_to_unit_square(const Polygon& poly, double tol) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (int i = 0; i < poly.n; ++i) {
    x0 = std::min(x0, poly.v[i].x());
    x1 = std::max(x1, poly.v[i].x());
    y0 = std::min(y0, poly.v[i].y());
    y1 = std::max(y1, poly.v[i].y());
  }
  if (x0 >= 0.0 && y0 >= 0.0 && x1 <= 1.0 && y1 <= 1.0) return poly;
  Polygon p = poly;
  const Point c00(0, 0), c10(1, 0), c11(1, 1), c01(0, 1);
  p = clip_left_of(p, c00, c10, tol);
  p = clip_left_of(p, c10, c11, tol);
  p = clip_left_of(p, c11, c01, tol);
  p = clip_left_of(p, c01, c00, tol);
  // Snap the tolerance band onto the square.
  for (int i = 0; i < p.n; ++i) {
    p.v[i].x() = std::clamp(p.v[i].x(), 0.0, 1.0);
    p.v[i].y() = std::clamp(p.v[i].y(), 0.0, 1.0);
  }
  return p;
}

double polygon_area(const Polygon& poly) {
  double a = 0.0;
  for (int i = 0; i < poly.n; ++i) {
    const Point& p = poly.v[i];
    const Point& q = poly.v[(i + 1) % poly.n];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

}  // namespace lgstab
