#include "qsdp/estimator.hpp"

#include <cmath>

namespace qsdp {

double per_iteration_cost(const ResourceReport& r, Eigen::Index n, Eigen::Index m) {
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  return (dm * r.mu_A + dn * dn * r.mu_S) * r.kappa_A * r.kappa_S * std::pow(r.kappa_H, 3);
}

ResourceReport estimate(const SdpInstance& inst, const Vector& y, double eta, double eps,
                        const NoiseModel& noise) {
  (void)eta;  // costs depend on the iterate only through S(y)
  const PointEvaluation point = evaluate_point(inst, y);
  const double n = static_cast<double>(inst.n());
  const double m = static_cast<double>(inst.m());

  ResourceReport r;
  r.kappa_A = linalg::condition_number(inst.flat());
  r.kappa_S = linalg::condition_number(point.slack);
  r.kappa_H = point.kappa_hessian;
  r.mu_A = linalg::mu_param(inst.flat());
  r.mu_S = linalg::mu_param(point.slack);
  r.mu_S_inv = linalg::mu_param(point.slack_inv);
  r.norm_H = point.hessian_eig.values.maxCoeff();

  const EffectiveLevels levels = effective_levels(noise, r.kappa_H, r.kappa_A);
  r.eps_S = levels.slack;
  r.eps_g_norm = noise.scale_by_kappa ? noise.eps_g_norm / r.kappa_H : noise.eps_g_norm;

  r.t_slack = n * n * r.mu_S * r.kappa_S / r.eps_S;
  r.t_grad_state = r.mu_A * r.kappa_A;
  r.t_grad_norm = r.mu_A * r.kappa_A / r.eps_g_norm;
  r.t_delta = m * (r.mu_A * r.kappa_A + r.mu_S * r.kappa_S) * r.norm_H * r.kappa_H * r.kappa_H;
  r.t_delta_inv = m * (r.mu_A * r.kappa_A + r.mu_S_inv * r.kappa_S) * r.norm_H * r.kappa_H * r.kappa_H;
  r.t_iter = per_iteration_cost(r, inst.n(), inst.m());
  r.t_total = std::sqrt(n) * std::log(1.0 / eps) * r.t_iter;
  r.plugin_total = std::sqrt(n) * (m * n + std::pow(n, 2.5));
  return r;
}

}  // namespace qsdp
