#pragma once

#include <array>

#include "lgstab/mesh.hpp"

namespace lgstab {

/// Convex polygon with a fixed vertex budget (triangle ∩ triangle ∩ square
/// never exceeds 10 vertices).
struct Polygon {
  static constexpr int kCapacity = 16;
  std::array<Point, kCapacity> v;
  int n = 0;

  void push(const Point& p) { v[n++] = p; }
  bool empty() const { return n < 3; }
};

Polygon make_triangle(const Point& a, const Point& b, const Point& c);

/// Keeps the part of `poly` left of the directed line a->b. Vertices within
/// `tol` (distance) of the line are kept as-is.
Polygon clip_left_of(const Polygon& poly, const Point& a, const Point& b, double tol);

/// Intersection of a convex polygon with a counterclockwise triangle.
Polygon intersect_triangle(const Polygon& poly, const std::array<Point, 3>& tri, double tol);

Polygon clip_to_unit_square(const Polygon& poly, double tol);

/// Signed area (positive for counterclockwise order).
double polygon_area(const Polygon& poly);

}  // namespace lgstab
