#include "qsdp/oracle.hpp"

#include "qsdp/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace qsdp {

namespace {

// Keeps the rescaled draws strictly inside their budgets despite rounding.
constexpr double kShrink = 1.0 - 1e-9;

void check_level(double value, const char* name) {
  if (!(value >= 0.0 && value <= 0.1)) {
    throw Error(ErrorKind::InvalidInput, std::string("noise level ") + name + " must lie in [0, 0.1]");
  }
}

Matrix gaussian_symmetric(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = normal(rng);
  }
  return linalg::symmetrize(g);
}

Vector unit_direction(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector u(n);
  for (Eigen::Index i = 0; i < n; ++i) u[i] = normal(rng);
  const double norm = u.norm();
  if (norm == 0.0) return u;
  return u / norm;
}

double relative(double num, double den) {
  if (num == 0.0) return 0.0;
  return den == 0.0 ? std::numeric_limits<double>::infinity() : num / den;
}

}  // namespace

void NoiseModel::validate() const {
  check_level(eps_S, "eps_S");
  check_level(eps_g, "eps_g");
  check_level(eps_g_norm, "eps_g_norm");
  check_level(eps_delta, "eps_delta");
  check_level(eps_n, "eps_n");
  check_level(eps_delta_norm, "eps_delta_norm");
  check_level(eps_H, "eps_H");
  if (!(c0 > 0.0)) throw Error(ErrorKind::InvalidInput, "c0 must be positive");
}

NoiseModel NoiseModel::zero(std::uint64_t seed) {
  NoiseModel model;
  model.eps_S = model.eps_g = model.eps_g_norm = 0.0;
  model.eps_delta = model.eps_n = model.eps_delta_norm = 0.0;
  model.seed = seed;
  return model;
}

EffectiveLevels effective_levels(const NoiseModel& model, double kappa_hessian, double kappa_flat) {
  double scale = 1.0;
  double slack_scale = 1.0;
  if (model.scale_by_kappa) {
    scale = 1.0 / kappa_hessian;
    slack_scale = scale / kappa_flat;
  }
  EffectiveLevels out;
  out.slack = model.eps_S * slack_scale;
  out.hessian = model.eps_H * scale;
  out.delta = (model.eps_delta + model.eps_n + model.eps_delta_norm) * scale;
  out.gradient = (model.eps_g + model.eps_g_norm) * scale;
  if (!model.propagate_slack_error) {
    // Composite bound O(ε_g + ε_g' + ε_S·κ(𝖠))·‖g‖ with unit constant.
    const double kappa = model.scale_by_kappa ? kappa_flat : 1.0;
    out.gradient += out.slack * (std::isfinite(kappa) ? kappa : 0.0);
  }
  return out;
}

// Building blocks -------------------------------------------------------------

Matrix exact_slack_inverse(const Matrix& s) { return linalg::psd_power(s, -1.0); }

Matrix sandwich_perturbation(const Matrix& m, double level, double frobenius_level, Rng& rng) {
  const Matrix root_inv = linalg::psd_power(m, -0.5);
  for (int attempt = 0; attempt < 20; ++attempt) {
    const Matrix e = gaussian_symmetric(m.rows(), rng);
    if (level == 0.0) return m;
    const double spectral = linalg::sym_eig(linalg::symmetrize(root_inv * e * root_inv)).values.cwiseAbs().maxCoeff();
    const double frob = e.norm();
    if (!(spectral > 0.0) || !(frob > 0.0) || !std::isfinite(spectral)) continue;
    double scale = level / spectral;
    if (frobenius_level >= 0.0) scale = std::min(scale, frobenius_level * m.norm() / frob);
    const Matrix out = linalg::symmetrize(m + (kShrink * scale) * e);
    const Matrix diff = out - m;
    const double realized_norm =
        linalg::sym_eig(linalg::symmetrize(root_inv * diff * root_inv)).values.cwiseAbs().maxCoeff();
    const bool norm_ok = realized_norm <= level;
    const bool frob_ok = frobenius_level < 0.0 || diff.norm() <= frobenius_level * m.norm();
    if (norm_ok && frob_ok) return out;
  }
  throw Error(ErrorKind::RescaleFailure, "no admissible perturbation after 20 draws");
}

SlackInverseDraw noisy_slack_inverse(const Matrix& s, double level, Rng& rng) {
  if (!(level >= 0.0 && level < 1.0)) {
    throw Error(ErrorKind::InvalidInput, "effective eps_S must lie in [0, 1)");
  }
  const Matrix s_inv = exact_slack_inverse(s);
  SlackInverseDraw draw;
  // Around M = S⁻¹: M^{-1/2} E M^{-1/2} = S^{1/2} E S^{1/2}.
  draw.slack_inv_tilde = sandwich_perturbation(s_inv, level, level, rng);
  const Matrix diff = draw.slack_inv_tilde - s_inv;
  const Matrix s_root = linalg::psd_power(s, 0.5);
  draw.frobenius_error = relative(diff.norm(), s_inv.norm());
  draw.spectral_error =
      linalg::sym_eig(linalg::symmetrize(s_root * diff * s_root)).values.cwiseAbs().maxCoeff();
  return draw;
}

Vector perturb_relative(const Vector& reference, double tau, Rng& rng) {
  const Vector u = unit_direction(reference.size(), rng);
  return reference + (kShrink * tau * reference.norm()) * u;
}

Vector noisy_gradient(const SdpInstance& inst, const Matrix& slack_inv_ref, double eta, double tau,
                      Rng& rng) {
  return perturb_relative(gradient(inst, slack_inv_ref, eta), tau, rng);
}

Vector noisy_delta(const Matrix& hessian_tilde, const Vector& g_tilde, double tau, Rng& rng) {
  if (g_tilde.isZero(0.0)) {
    (void)unit_direction(g_tilde.size(), rng);
    return Vector::Zero(g_tilde.size());
  }
  const Vector newton = linalg::spd_solve(hessian_tilde, g_tilde);
  return perturb_relative(-newton, tau, rng);
}

// Oracles ---------------------------------------------------------------------

Matrix Oracle::hessian(const OracleContext& ctx, const Matrix& slack_inv_tilde) {
  injected_.hessian_spectral = 0.0;
  return qsdp::hessian(ctx.instance, slack_inv_tilde);
}

Matrix ExactOracle::slack_inverse(const OracleContext& ctx) {
  injected_ = InjectedErrors{};
  return ctx.point.slack_inv;
}

Vector ExactOracle::gradient(const OracleContext& ctx, const Matrix& slack_inv_tilde, double eta_new) {
  return qsdp::gradient(ctx.instance, slack_inv_tilde, eta_new);
}

Vector ExactOracle::delta(const OracleContext&, const Matrix& hessian_tilde, const Vector& g_tilde) {
  if (g_tilde.isZero(0.0)) return Vector::Zero(g_tilde.size());
  return -linalg::spd_solve(hessian_tilde, g_tilde);
}

NoisyOracle::NoisyOracle(NoiseModel model) : model_(model), rng_(model.seed) { model_.validate(); }

void NoisyOracle::refresh_levels(const OracleContext& ctx) {
  levels_ = effective_levels(model_, ctx.point.kappa_hessian, ctx.kappa_flat);
}

Matrix NoisyOracle::slack_inverse(const OracleContext& ctx) {
  refresh_levels(ctx);
  injected_ = InjectedErrors{};
  SlackInverseDraw draw = noisy_slack_inverse(ctx.point.slack, levels_.slack, rng_);
  injected_.slack_frobenius = draw.frobenius_error;
  injected_.slack_spectral = draw.spectral_error;
  return std::move(draw.slack_inv_tilde);
}

Matrix NoisyOracle::hessian(const OracleContext& ctx, const Matrix& slack_inv_tilde) {
  const Matrix exact = qsdp::hessian(ctx.instance, slack_inv_tilde);
  if (model_.eps_H == 0.0) {
    injected_.hessian_spectral = 0.0;
    return exact;
  }
  const Matrix out = sandwich_perturbation(exact, levels_.hessian, -1.0, rng_);
  const Matrix root_inv = linalg::psd_power(exact, -0.5);
  injected_.hessian_spectral =
      linalg::sym_eig(linalg::symmetrize(root_inv * (out - exact) * root_inv)).values.cwiseAbs().maxCoeff();
  return out;
}

Vector NoisyOracle::gradient(const OracleContext& ctx, const Matrix& slack_inv_tilde, double eta_new) {
  const Matrix& reference = model_.propagate_slack_error ? slack_inv_tilde : ctx.point.slack_inv;
  const Vector g_ref = qsdp::gradient(ctx.instance, reference, eta_new);
  const Vector out = perturb_relative(g_ref, levels_.gradient, rng_);
  injected_.gradient = relative((out - g_ref).norm(), g_ref.norm());
  return out;
}

Vector NoisyOracle::delta(const OracleContext&, const Matrix& hessian_tilde, const Vector& g_tilde) {
  const Vector out = noisy_delta(hessian_tilde, g_tilde, levels_.delta, rng_);
  if (g_tilde.isZero(0.0)) {
    injected_.delta = 0.0;
    return out;
  }
  const Vector newton = linalg::spd_solve(hessian_tilde, g_tilde);
  injected_.delta = relative((out + newton).norm(), newton.norm());
  return out;
}

}  // namespace qsdp
