// Serial vs OpenMP timings of the element-loop kernels.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "lgstab/assembly.hpp"
#include "lgstab/characteristics.hpp"
#include "lgstab/fe_space.hpp"
#include "lgstab/mesh.hpp"

using namespace lgstab;

namespace {

double best_of(int reps, const std::function<void()>& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void report(const char* name, int N, double serial, double parallel) {
  std::printf("%-22s N=%-3d serial %9.4f s  parallel %9.4f s  speedup %5.2f\n", name, N, serial,
              parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  const int N = argc > 1 ? std::atoi(argv[1]) : 32;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 3;
  std::printf("threads: %d\n", max_threads());

  auto mesh = std::make_shared<const Mesh>(generate_unit_square_mesh(N));
  auto p2 = std::make_shared<const FeSpace>(mesh, 2);
  auto p1 = std::make_shared<const FeSpace>(mesh, 1);

  report("assemble_operators", N,
         best_of(reps, [&] { assemble_operators(*p2, *p2, true, Exec::serial); }),
         best_of(reps, [&] { assemble_operators(*p2, *p2, true, Exec::parallel); }));

  const double dt = 1.0 / (N * N);
  const VectorFunction w = [](const Point& x) {
    const double s = std::sin(M_PI * x.x()) * std::sin(M_PI * x.y());
    return Point(s * (x.y() - 0.5), -s * (x.x() - 0.5));
  };
  const VectorFunction u = [](const Point& x) {
    return Point(std::sin(3 * x.x()) * std::cos(2 * x.y()), x.x() * x.y());
  };
  Field w1 = lagrange_interpolate(p1, w);
  for (int i = 0; i < p1->num_dofs(); ++i)
    if (p1->is_dirichlet(i)) w1.coeff(0, i) = w1.coeff(1, i) = 0.0;
  const CharMap cm(w1, dt);
  const Field uh = lagrange_interpolate(p2, u);
  for (auto mode : {CompositeMode::exact, CompositeMode::quadrature}) {
    report(mode == CompositeMode::exact ? "composite exact" : "composite quadrature", N,
           best_of(reps, [&] { composite_load_vector(cm, uh, *p2, mode, Exec::serial); }),
           best_of(reps, [&] { composite_load_vector(cm, uh, *p2, mode, Exec::parallel); }));
  }
  return 0;
}
