#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace lgstab {

using Point = Eigen::Vector2d;
using Triangle = std::array<int, 3>;

inline constexpr int kNoNeighbor = -1;
inline constexpr double kLocateTolerance = 1e-10;

enum class MeshPattern { crisscross, alternating_diagonal };

struct Location {
  int element;
  std::array<double, 3> bary;
};

/// Conforming triangulation of the unit square.
///
/// Immutable after construction. Besides connectivity it caches per-element
/// areas, diameters, barycentric gradients and a uniform bucket grid used for
/// point location and bounding-box candidate queries.
class Mesh {
 public:
  /// Builds a mesh from raw arrays. Elements are reoriented counterclockwise.
  /// If `boundary_flags` is empty, flags are derived from edges that belong
  /// to a single element.
  Mesh(std::vector<Point> vertices, std::vector<Triangle> elements,
       std::vector<bool> boundary_flags = {});

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_elements() const { return static_cast<int>(elements_.size()); }

  const Point& vertex(int v) const { return vertices_[v]; }
  const Triangle& element(int e) const { return elements_[e]; }
  std::span<const Point> vertices() const { return vertices_; }
  std::span<const Triangle> elements() const { return elements_; }
  bool is_boundary_vertex(int v) const { return boundary_[v]; }
  const std::array<int, 3>& neighbors(int e) const { return neighbors_[e]; }

  double area(int e) const { return area_[e]; }
  double diameter(int e) const { return diameter_[e]; }
  double h() const { return h_max_; }
  /// Gradient of barycentric coordinate i on element e (constant).
  const Point& grad_lambda(int e, int i) const { return grad_lambda_[e][i]; }

  std::array<double, 3> barycentric(int e, const Point& x) const;
  Point centroid(int e) const;

  /// Element containing x. Ties on shared edges/vertices go to the lowest
  /// element id. Points outside the unit square by at most kLocateTolerance
  /// are clamped first; farther points raise OutOfDomain.
  Location locate(const Point& x, std::optional<int> hint = std::nullopt) const;

  /// Appends ids of elements whose bounding box overlaps [lo, hi], ascending
  /// and without duplicates.
  void candidates(const Point& lo, const Point& hi, std::vector<int>& out) const;

  /// Edges as sorted vertex pairs, sorted lexicographically, with the number
  /// of elements sharing each edge.
  struct Edge {
    int a, b;
    int count;
  };
  const std::vector<Edge>& edges() const { return edges_; }
  /// Index into edges() of local edge j of element e (edge j joins local
  /// vertices j and (j+1)%3).
  int element_edge(int e, int j) const { return element_edges_[e][j]; }

  bool is_conforming() const;

  void write(std::ostream& os) const;
  static Mesh read(std::istream& is);

 private:
  void build_connectivity();
  void build_geometry();
  void build_buckets();
  int bucket_index(double x, int axis) const;
  std::optional<Location> walk(const Point& x, int start) const;
  std::optional<Location> scan_bucket(const Point& x) const;
  std::optional<Location> scan_all(const Point& x) const;

  std::vector<Point> vertices_;
  std::vector<Triangle> elements_;
  std::vector<bool> boundary_;
  std::vector<std::array<int, 3>> neighbors_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> element_edges_;
  std::vector<double> area_;
  std::vector<double> diameter_;
  std::vector<std::array<Point, 3>> grad_lambda_;
  double h_max_ = 0.0;

  int grid_n_ = 1;
  std::vector<int> bucket_offsets_;
  std::vector<int> bucket_elements_;
};

/// Structured triangulation of (0,1)^2 with N divisions per side.
/// crisscross: 4 triangles per cell around the cell center.
/// alternating_diagonal: 2 triangles per cell, diagonal direction alternating
/// in a checkerboard.
Mesh generate_unit_square_mesh(int n, MeshPattern pattern = MeshPattern::crisscross);

struct InternalVertexReport {
  bool ok;
  std::vector<int> violating_elements;
};

/// Every element must have at least one vertex off the boundary.
InternalVertexReport check_internal_vertex_hypothesis(const Mesh& mesh);

}  // namespace lgstab
