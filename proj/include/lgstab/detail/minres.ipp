#pragma once

#include <cmath>

namespace lgstab {

template <typename ApplyA, typename ApplyPinv>
int minres(ApplyA&& apply_a, ApplyPinv&& apply_pinv, const Eigen::VectorXd& b,
           Eigen::VectorXd& x, double rel_tol, int max_iter) {
  const Eigen::Index n = b.size();
  Eigen::VectorXd v_old = Eigen::VectorXd::Zero(n), v(n), v_new(n);
  Eigen::VectorXd z(n), z_new(n), az(n);
  Eigen::VectorXd w_old = Eigen::VectorXd::Zero(n), w = Eigen::VectorXd::Zero(n), w_new(n);

  apply_a(x, az);
  v = b - az;
  apply_pinv(v, z);
  double gamma = std::sqrt(std::max(0.0, z.dot(v)));
  if (gamma == 0.0) return 0;
  double gamma_old = 1.0;
  double eta = gamma;
  const double eta0 = gamma;
  double s_old = 0.0, s = 0.0, c_old = 1.0, c = 1.0;

  int it = 0;
  while (it < max_iter) {
    ++it;
    z /= gamma;
    apply_a(z, az);
    const double delta = az.dot(z);
    v_new = az - (delta / gamma) * v - (gamma / gamma_old) * v_old;
    apply_pinv(v_new, z_new);
    const double gamma_new = std::sqrt(std::max(0.0, z_new.dot(v_new)));
    const double a0 = c * delta - c_old * s * gamma;
    const double a1 = std::sqrt(a0 * a0 + gamma_new * gamma_new);
    const double a2 = s * delta + c_old * c * gamma;
    const double a3 = s_old * gamma;
    const double c_new = a0 / a1;
    const double s_new = gamma_new / a1;
    w_new = (z - a3 * w_old - a2 * w) / a1;
    x += c_new * eta * w_new;
    eta = -s_new * eta;

    v_old.swap(v);
    v.swap(v_new);
    z.swap(z_new);
    w_old.swap(w);
    w.swap(w_new);
    gamma_old = gamma;
    gamma = gamma_new;
    c_old = c;
    c = c_new;
    s_old = s;
    s = s_new;
    if (std::abs(eta) <= rel_tol * eta0 || gamma == 0.0) break;
  }
  return it;
}

}  // namespace lgstab
