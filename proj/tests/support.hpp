#pragma once

// Helpers shared by the unit tests and the acceptance run.

#include "qsdp/instance.hpp"
#include "qsdp/linalg.hpp"
#include "qsdp/oracle.hpp"

#include <algorithm>
#include <random>

namespace qsdp::testing {

struct FeasiblePoint {
  SdpInstance instance;
  Vector y;
  double eta;
};

/// A random instance (n, m ≤ 4) and a strictly feasible point moved off the
/// central path so that the gradient is far from zero.
inline FeasiblePoint random_feasible_point(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Eigen::Index n = std::uniform_int_distribution<Eigen::Index>(2, 4)(rng);
  const Eigen::Index m = std::uniform_int_distribution<Eigen::Index>(1, std::min<Eigen::Index>(4, n * (n + 1) / 2))(rng);
  SeededInstance s = gen_random_wellcond(n, m, 5.0, seed);

  std::normal_distribution<double> normal;
  Vector d(m);
  for (Eigen::Index i = 0; i < m; ++i) d[i] = normal(rng);
  const Matrix s0 = slack(s.instance, s.y0);
  const double room = linalg::sym_eig(s0).values.minCoeff();
  Matrix ad = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < m; ++i) ad += d[i] * s.instance.constraint(i);
  const double step = 0.5 * room / std::max(linalg::spectral_norm(ad), 1e-12);
  const double eta = std::uniform_real_distribution<double>(0.5, 2.0)(rng);
  return {s.instance, s.y0 + step * d, eta};
}

/// Central differences of η·bᵀy − log det S(y).
inline Vector fd_gradient(const SdpInstance& inst, const Vector& y, double eta, double h = 1e-5) {
  Vector g(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    Vector yp = y, ym = y;
    yp[i] += h;
    ym[i] -= h;
    g[i] = (barrier_value(inst, yp, eta) - barrier_value(inst, ym, eta)) / (2 * h);
  }
  return g;
}

/// Central differences of the analytic gradient.
inline Matrix fd_hessian(const SdpInstance& inst, const Vector& y, double eta, double h = 1e-5) {
  const Eigen::Index m = y.size();
  Matrix hess(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    Vector yp = y, ym = y;
    yp[i] += h;
    ym[i] -= h;
    hess.col(i) = (gradient(inst, exact_slack_inverse_at(inst, yp), eta) -
                   gradient(inst, exact_slack_inverse_at(inst, ym), eta)) / (2 * h);
  }
  return linalg::symmetrize(hess);
}

/// Worst realized-to-allowed ratios over seeded draws of every noisy
/// operation. A ratio ≤ 1 means the contract held in every draw.
struct ContractAudit {
  int draws = 0;
  double slack_frobenius = 0.0;  // ‖S̃⁻¹ − S⁻¹‖_F / (ε‖S⁻¹‖_F)
  double slack_sandwich = 0.0;   // (loewner_factor − 1) / (1/(1 − ε) − 1)
  double hessian_sandwich = 0.0;
  double gradient = 0.0;
  double delta = 0.0;
  bool passed() const {
    return slack_frobenius <= 1 && slack_sandwich <= 1 && hessian_sandwich <= 1 && gradient <= 1 && delta <= 1;
  }
};

inline ContractAudit audit_contracts(int draws, std::uint64_t seed) {
  ContractAudit audit;
  audit.draws = draws;
  Rng rng(seed);
  std::uniform_real_distribution<double> level(1e-6, 0.05);
  for (int k = 0; k < draws; ++k) {
    const FeasiblePoint p = random_feasible_point(seed + static_cast<std::uint64_t>(k % 50));
    const PointEvaluation pt = evaluate_point(p.instance, p.y);

    const double es = level(rng);
    const SlackInverseDraw d = noisy_slack_inverse(pt.slack, es, rng);
    audit.slack_frobenius =
        std::max(audit.slack_frobenius, (d.slack_inv_tilde - pt.slack_inv).norm() / (es * pt.slack_inv.norm()));
    const double sandwich_room = 1.0 / (1.0 - es) - 1.0;
    audit.slack_sandwich =
        std::max(audit.slack_sandwich, (linalg::loewner_factor(pt.slack_inv, d.slack_inv_tilde) - 1.0) / sandwich_room);

    const double eh = level(rng);
    const Matrix h_tilde = sandwich_perturbation(pt.hessian, eh, -1.0, rng);
    audit.hessian_sandwich = std::max(
        audit.hessian_sandwich, (linalg::loewner_factor(pt.hessian, h_tilde) - 1.0) / (1.0 / (1.0 - eh) - 1.0));

    const double eg = level(rng);
    const Vector g = gradient(p.instance, pt.slack_inv, p.eta);
    const Vector g_tilde = noisy_gradient(p.instance, pt.slack_inv, p.eta, eg, rng);
    audit.gradient = std::max(audit.gradient, (g_tilde - g).norm() / (eg * g.norm()));

    const double ed = level(rng);
    const Vector newton = -linalg::spd_solve(pt.hessian, g_tilde);
    const Vector delta = noisy_delta(pt.hessian, g_tilde, ed, rng);
    audit.delta = std::max(audit.delta, (delta - newton).norm() / (ed * newton.norm()));
  }
  return audit;
}

inline double rel_diff(const Matrix& a, const Matrix& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

}  // namespace qsdp::testing
