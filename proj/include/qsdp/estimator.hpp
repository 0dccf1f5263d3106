#pragma once

// Per-iteration and total cost of the quantum second-order solver evaluated
// on a concrete instance and iterate. All costs are in relative units:
// constants and polylogarithmic factors are dropped, so only ratios and
// growth rates are meaningful.

#include "qsdp/instance.hpp"
#include "qsdp/oracle.hpp"

namespace qsdp {

struct ResourceReport {
  double kappa_A = 1.0;  // κ(𝖠), 𝖠 the m × n² constraint matrix
  double kappa_S = 1.0;
  double kappa_H = 1.0;
  double mu_A = 0.0;
  double mu_S = 0.0;
  double mu_S_inv = 0.0;  // μ(S⁻¹), for the update cost written with the inverse slack
  double norm_H = 0.0;

  double eps_S = 0.0;  // effective levels the step costs were evaluated at
  double eps_g_norm = 0.0;

  double t_slack = 0.0;       // n² μ(S) κ(S) / ε_S
  double t_grad_state = 0.0;  // μ(𝖠) κ(𝖠)
  double t_grad_norm = 0.0;   // μ(𝖠) κ(𝖠) / ε_g'
  double t_delta = 0.0;       // m (μ(𝖠)κ(𝖠) + μ(S)κ(S)) ‖H‖ κ(H)²
  double t_delta_inv = 0.0;   // same with μ(S⁻¹) in place of μ(S)
  double t_iter = 0.0;        // (m μ(𝖠) + n² μ(S)) κ(𝖠) κ(S) κ(H)³
  double t_total = 0.0;       // √n ln(1/ε) t_iter
  double plugin_total = 0.0;  // √n (m n + n^{2.5})
};

/// t_iter recomputed from the κ/μ fields of a report.
double per_iteration_cost(const ResourceReport& report, Eigen::Index n, Eigen::Index m);

/// Throws NotStrictlyFeasible when S(y) is not PD.
ResourceReport estimate(const SdpInstance& inst, const Vector& y, double eta, double eps,
                        const NoiseModel& noise = {});

}  // namespace qsdp
