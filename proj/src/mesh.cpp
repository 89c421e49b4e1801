#include "lgstab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <tuple>

#include "lgstab/errors.hpp"

namespace lgstab {

namespace {

constexpr double kBaryTol = 1e-12;

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

double min3(const std::array<double, 3>& l) { return std::min({l[0], l[1], l[2]}); }

bool on_square_side(const Point& a, const Point& b) {
  auto same = [](double u, double v, double s) { return u == s && v == s; };
  return same(a.x(), b.x(), 0.0) || same(a.x(), b.x(), 1.0) || same(a.y(), b.y(), 0.0) ||
         same(a.y(), b.y(), 1.0);
}

}  // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<Triangle> elements,
           std::vector<bool> boundary_flags)
    : vertices_(std::move(vertices)), elements_(std::move(elements)) {
  LGSTAB_REQUIRE(!elements_.empty(), InvalidArgument, "mesh has no elements");
  const int nv = num_vertices();
  for (auto& t : elements_) {
    for (int v : t) {
      LGSTAB_REQUIRE(v >= 0 && v < nv, InvalidArgument, "element references unknown vertex");
    }
    const double a = signed_area(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]);
    LGSTAB_REQUIRE(a != 0.0, InvalidArgument, "degenerate element");
    if (a < 0) std::swap(t[1], t[2]);
  }
  build_connectivity();
  if (boundary_flags.empty()) {
    boundary_.assign(nv, false);
    for (const auto& ed : edges_) {
      if (ed.count == 1) boundary_[ed.a] = boundary_[ed.b] = true;
    }
  } else {
    LGSTAB_REQUIRE(static_cast<int>(boundary_flags.size()) == nv, InvalidArgument,
                   "boundary flag count does not match vertex count");
    boundary_ = std::move(boundary_flags);
  }
  build_geometry();
  build_buckets();
}

void Mesh::build_connectivity() {
  const int ne = num_elements();
  // (a, b, element, local edge)
  std::vector<std::tuple<int, int, int, int>> half;
  half.reserve(3 * ne);
  for (int e = 0; e < ne; ++e) {
    for (int j = 0; j < 3; ++j) {
      int a = elements_[e][j], b = elements_[e][(j + 1) % 3];
      if (a > b) std::swap(a, b);
      half.emplace_back(a, b, e, j);
    }
  }
  std::sort(half.begin(), half.end());
  neighbors_.assign(ne, {kNoNeighbor, kNoNeighbor, kNoNeighbor});
  element_edges_.assign(ne, {-1, -1, -1});
  edges_.clear();
  for (std::size_t i = 0; i < half.size();) {
    std::size_t j = i;
    while (j < half.size() && std::get<0>(half[j]) == std::get<0>(half[i]) &&
           std::get<1>(half[j]) == std::get<1>(half[i])) {
      ++j;
    }
    const int id = static_cast<int>(edges_.size());
    edges_.push_back({std::get<0>(half[i]), std::get<1>(half[i]), static_cast<int>(j - i)});
    for (std::size_t k = i; k < j; ++k) element_edges_[std::get<2>(half[k])][std::get<3>(half[k])] = id;
    if (j - i == 2) {
      const auto [a0, b0, e0, l0] = half[i];
      const auto [a1, b1, e1, l1] = half[i + 1];
      neighbors_[e0][l0] = e1;
      neighbors_[e1][l1] = e0;
    }
    i = j;
  }
}

void Mesh::build_geometry() {
  const int ne = num_elements();
  area_.resize(ne);
  diameter_.resize(ne);
  grad_lambda_.resize(ne);
  h_max_ = 0.0;
  for (int e = 0; e < ne; ++e) {
    const auto& t = elements_[e];
    const Point& p0 = vertices_[t[0]];
    const Point& p1 = vertices_[t[1]];
    const Point& p2 = vertices_[t[2]];
    const double a = signed_area(p0, p1, p2);
    area_[e] = a;
    diameter_[e] = std::max({(p1 - p0).norm(), (p2 - p1).norm(), (p0 - p2).norm()});
    h_max_ = std::max(h_max_, diameter_[e]);
    // grad lambda_i = rot(p_{i+2} - p_{i+1}) / (2|K|), rotated by -90 degrees
    for (int i = 0; i < 3; ++i) {
      const Point& pa = vertices_[t[(i + 1) % 3]];
      const Point& pb = vertices_[t[(i + 2) % 3]];
      grad_lambda_[e][i] = Point(pa.y() - pb.y(), pb.x() - pa.x()) / (2.0 * a);
    }
  }
}

void Mesh::build_buckets() {
  const int ne = num_elements();
  grid_n_ = std::max(1, static_cast<int>(std::sqrt(ne / 2.0)));
  std::vector<std::vector<int>> lists(static_cast<std::size_t>(grid_n_) * grid_n_);
  constexpr double pad = 1e-9;
  for (int e = 0; e < ne; ++e) {
    const auto& t = elements_[e];
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (int v : t) {
      x0 = std::min(x0, vertices_[v].x());
      x1 = std::max(x1, vertices_[v].x());
      y0 = std::min(y0, vertices_[v].y());
      y1 = std::max(y1, vertices_[v].y());
    }
    const int i0 = bucket_index(x0 - pad, 0), i1 = bucket_index(x1 + pad, 0);
    const int j0 = bucket_index(y0 - pad, 1), j1 = bucket_index(y1 + pad, 1);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) lists[static_cast<std::size_t>(j) * grid_n_ + i].push_back(e);
  }
  bucket_offsets_.assign(lists.size() + 1, 0);
  for (std::size_t b = 0; b < lists.size(); ++b)
    bucket_offsets_[b + 1] = bucket_offsets_[b] + static_cast<int>(lists[b].size());
  bucket_elements_.clear();
  bucket_elements_.reserve(bucket_offsets_.back());
  for (const auto& l : lists) bucket_elements_.insert(bucket_elements_.end(), l.begin(), l.end());
}

int Mesh::bucket_index(double x, int /*axis*/) const {
  const int i = static_cast<int>(std::floor(x * grid_n_));
  return std::clamp(i, 0, grid_n_ - 1);
}

std::array<double, 3> Mesh::barycentric(int e, const Point& x) const {
  const auto& t = elements_[e];
  std::array<double, 3> l{};
  for (int i = 0; i < 3; ++i) {
    // lambda_i vanishes on the opposite edge, which passes through vertex i+1.
    l[i] = grad_lambda_[e][i].dot(x - vertices_[t[(i + 1) % 3]]);
  }
  return l;
}

Point Mesh::centroid(int e) const {
  const auto& t = elements_[e];
  return (vertices_[t[0]] + vertices_[t[1]] + vertices_[t[2]]) / 3.0;
}

std::optional<Location> Mesh::walk(const Point& x, int start) const {
  int e = start;
  for (int step = 0; step <= num_elements(); ++step) {
    const auto l = barycentric(e, x);
    int worst = 0;
    for (int i = 1; i < 3; ++i)
      if (l[i] < l[worst]) worst = i;
    if (l[worst] >= -kBaryTol) return Location{e, l};
    const int next = neighbors_[e][(worst + 1) % 3];
    if (next == kNoNeighbor) return std::nullopt;
    e = next;
  }
  return std::nullopt;
}

std::optional<Location> Mesh::scan_bucket(const Point& x) const {
  const std::size_t b = static_cast<std::size_t>(bucket_index(x.y(), 1)) * grid_n_ + bucket_index(x.x(), 0);
  for (int k = bucket_offsets_[b]; k < bucket_offsets_[b + 1]; ++k) {
    const int e = bucket_elements_[k];
    const auto l = barycentric(e, x);
    if (min3(l) >= -kBaryTol) return Location{e, l};
  }
  return std::nullopt;
}

std::optional<Location> Mesh::scan_all(const Point& x) const {
  for (int e = 0; e < num_elements(); ++e) {
    const auto l = barycentric(e, x);
    if (min3(l) >= -kBaryTol) return Location{e, l};
  }
  return std::nullopt;
}

Location Mesh::locate(const Point& x_in, std::optional<int> hint) const {
  const double lo = -kLocateTolerance, hi = 1.0 + kLocateTolerance;
  if (!(x_in.x() >= lo && x_in.x() <= hi && x_in.y() >= lo && x_in.y() <= hi)) {
    std::ostringstream msg;
    msg << "point (" << x_in.x() << ", " << x_in.y() << ") lies outside the domain";
    throw OutOfDomain(msg.str());
  }
  const Point x(std::clamp(x_in.x(), 0.0, 1.0), std::clamp(x_in.y(), 0.0, 1.0));

  if (hint && *hint >= 0 && *hint < num_elements()) {
    if (auto loc = walk(x, *hint)) {
      // Strictly interior points have a unique owner.
      if (min3(loc->bary) > kBaryTol) return *loc;
    }
  }
  if (auto loc = scan_bucket(x)) return *loc;
  if (auto loc = scan_all(x)) return *loc;
  throw OutOfDomain("point location failed");
}

void Mesh::candidates(const Point& lo, const Point& hi, std::vector<int>& out) const {
  const std::size_t first = out.size();
  const int i0 = bucket_index(lo.x(), 0), i1 = bucket_index(hi.x(), 0);
  const int j0 = bucket_index(lo.y(), 1), j1 = bucket_index(hi.y(), 1);
  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) {
      const std::size_t b = static_cast<std::size_t>(j) * grid_n_ + i;
      out.insert(out.end(), bucket_elements_.begin() + bucket_offsets_[b],
                 bucket_elements_.begin() + bucket_offsets_[b + 1]);
    }
  }
  std::sort(out.begin() + first, out.end());
  out.erase(std::unique(out.begin() + first, out.end()), out.end());
  // Exact bounding-box filter.
  auto keep = out.begin() + first;
  for (auto it = out.begin() + first; it != out.end(); ++it) {
    const auto& t = elements_[*it];
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (int v : t) {
      x0 = std::min(x0, vertices_[v].x());
      x1 = std::max(x1, vertices_[v].x());
      y0 = std::min(y0, vertices_[v].y());
      y1 = std::max(y1, vertices_[v].y());
    }
    if (x1 >= lo.x() && x0 <= hi.x() && y1 >= lo.y() && y0 <= hi.y()) *keep++ = *it;
  }
  out.erase(keep, out.end());
}

bool Mesh::is_conforming() const {
  for (const auto& ed : edges_) {
    if (ed.count > 2) return false;
    if (ed.count == 1 && !on_square_side(vertices_[ed.a], vertices_[ed.b])) return false;
  }
  return true;
}

void Mesh::write(std::ostream& os) const {
  char buf[128];
  os << num_vertices() << ' ' << num_elements() << '\n';
  for (int v = 0; v < num_vertices(); ++v) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %d\n", vertices_[v].x(), vertices_[v].y(),
                  boundary_[v] ? 1 : 0);
    os << buf;
  }
  for (const auto& t : elements_) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

Mesh Mesh::read(std::istream& is) {
  int nv = 0, ne = 0;
  LGSTAB_REQUIRE(static_cast<bool>(is >> nv >> ne) && nv > 0 && ne > 0, InvalidArgument,
                 "bad mesh header");
  std::vector<Point> verts(nv);
  std::vector<bool> flags(nv);
  for (int v = 0; v < nv; ++v) {
    double x, y;
    int b;
    LGSTAB_REQUIRE(static_cast<bool>(is >> x >> y >> b), InvalidArgument, "bad vertex line");
    verts[v] = Point(x, y);
    flags[v] = b != 0;
  }
  std::vector<Triangle> elems(ne);
  for (auto& t : elems) {
    LGSTAB_REQUIRE(static_cast<bool>(is >> t[0] >> t[1] >> t[2]), InvalidArgument,
                   "bad element line");
  }
  return Mesh(std::move(verts), std::move(elems), std::move(flags));
}

Mesh generate_unit_square_mesh(int n, MeshPattern pattern) {
  LGSTAB_REQUIRE(n >= 2, InvalidArgument, "mesh division N must be at least 2");
  const int m = n + 1;
  std::vector<Point> verts;
  auto grid = [m](int i, int j) { return j * m + i; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      verts.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
  std::vector<Triangle> elems;
  if (pattern == MeshPattern::crisscross) {
    elems.reserve(4 * n * n);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const int c = static_cast<int>(verts.size());
        verts.emplace_back((i + 0.5) / n, (j + 0.5) / n);
        const int v00 = grid(i, j), v10 = grid(i + 1, j), v11 = grid(i + 1, j + 1),
                  v01 = grid(i, j + 1);
        elems.push_back({v00, v10, c});
        elems.push_back({v10, v11, c});
        elems.push_back({v11, v01, c});
        elems.push_back({v01, v00, c});
      }
    }
  } else {
    elems.reserve(2 * n * n);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const int v00 = grid(i, j), v10 = grid(i + 1, j), v11 = grid(i + 1, j + 1),
                  v01 = grid(i, j + 1);
        if ((i + j) % 2 == 0) {
          elems.push_back({v00, v10, v11});
          elems.push_back({v00, v11, v01});
        } else {
          elems.push_back({v00, v10, v01});
          elems.push_back({v10, v11, v01});
        }
      }
    }
  }
  return Mesh(std::move(verts), std::move(elems));
}

InternalVertexReport check_internal_vertex_hypothesis(const Mesh& mesh) {
  InternalVertexReport r{true, {}};
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& t = mesh.element(e);
    if (mesh.is_boundary_vertex(t[0]) && mesh.is_boundary_vertex(t[1]) &&
        mesh.is_boundary_vertex(t[2])) {
      r.ok = false;
      r.violating_elements.push_back(e);
    }
  }
  return r;
}

}  // namespace lgstab
