#pragma once

// Producers of the approximate per-iteration quantities S̃⁻¹, g̃ and δ̃.
//
// The exact oracle returns the true values. The noisy oracle reproduces the
// output error contracts of the quantum subroutines (slack inverse, gradient
// state + norm, Newton update via linear solve + tomography) by injecting
// seeded random perturbations of the contracted relative size. No circuit is
// simulated.

#include "qsdp/instance.hpp"
#include "qsdp/linalg.hpp"

#include <cstdint>
#include <random>
#include <string_view>

namespace qsdp {

using Rng = std::mt19937_64;

/// Relative error levels of the simulated subroutines.
///
/// With scale_by_kappa set, every level is divided by κ(H(y)) at the current
/// iterate, and eps_S additionally by κ(𝖠). The default levels are c0/4 each,
/// so that each of the gradient and update error budgets sums to 0.75·c0/κ.
struct NoiseModel {
  static constexpr double kDefaultC0 = 1e-4;
  static constexpr double kDefaultLevel = kDefaultC0 / 4.0;

  double eps_S = kDefaultLevel;
  double eps_g = kDefaultLevel;
  double eps_g_norm = kDefaultLevel;
  double eps_delta = kDefaultLevel;
  double eps_n = kDefaultLevel;
  double eps_delta_norm = kDefaultLevel;
  bool scale_by_kappa = true;
  double c0 = kDefaultC0;
  std::uint64_t seed = 0;

  /// Loewner-relative perturbation of H̃ around H(S̃). Off by default; used to
  /// stress the Hessian condition.
  double eps_H = 0.0;
  /// When set, g̃ is built around g(S̃) so the slack-inverse error propagates
  /// into the gradient instead of being accounted for through κ(𝖠).
  bool propagate_slack_error = false;

  /// Throws InvalidInput unless every level lies in [0, 0.1] and c0 > 0.
  void validate() const;

  static NoiseModel zero(std::uint64_t seed = 0);
};

/// Levels after κ-scaling at one iterate.
struct EffectiveLevels {
  double slack = 0.0;
  double gradient = 0.0;  // total relative ℓ₂ budget for g̃
  double delta = 0.0;     // total relative ℓ₂ budget for δ̃
  double hessian = 0.0;
};

EffectiveLevels effective_levels(const NoiseModel& model, double kappa_hessian, double kappa_flat);

/// Realized relative errors of the last oracle call, as reported by the
/// oracle itself. The solver re-measures them independently.
struct InjectedErrors {
  double slack_frobenius = 0.0;  // ‖S̃⁻¹ − S⁻¹‖_F / ‖S⁻¹‖_F
  double slack_spectral = 0.0;   // ‖S^{1/2}(S̃⁻¹ − S⁻¹)S^{1/2}‖₂
  double hessian_spectral = 0.0;
  double gradient = 0.0;         // ‖g̃ − g_ref‖₂ / ‖g_ref‖₂
  double delta = 0.0;            // ‖δ̃ + H̃⁻¹g̃‖₂ / ‖H̃⁻¹g̃‖₂
};

/// Everything an oracle may look at for one iteration.
struct OracleContext {
  const SdpInstance& instance;
  const PointEvaluation& point;
  double kappa_flat;
};

class Oracle {
 public:
  virtual ~Oracle() = default;

  virtual std::string_view name() const = 0;
  virtual Matrix slack_inverse(const OracleContext& ctx) = 0;
  /// H̃ given S̃⁻¹. Defaults to the exact H(S̃).
  virtual Matrix hessian(const OracleContext& ctx, const Matrix& slack_inv_tilde);
  virtual Vector gradient(const OracleContext& ctx, const Matrix& slack_inv_tilde, double eta_new) = 0;
  virtual Vector delta(const OracleContext& ctx, const Matrix& hessian_tilde, const Vector& g_tilde) = 0;

  const InjectedErrors& injected() const { return injected_; }
  const EffectiveLevels& levels() const { return levels_; }

 protected:
  InjectedErrors injected_;
  EffectiveLevels levels_;
};

class ExactOracle final : public Oracle {
 public:
  std::string_view name() const override { return "exact"; }
  Matrix slack_inverse(const OracleContext& ctx) override;
  Vector gradient(const OracleContext& ctx, const Matrix& slack_inv_tilde, double eta_new) override;
  Vector delta(const OracleContext& ctx, const Matrix& hessian_tilde, const Vector& g_tilde) override;
};

class NoisyOracle final : public Oracle {
 public:
  explicit NoisyOracle(NoiseModel model);

  std::string_view name() const override { return "noisy"; }
  const NoiseModel& model() const { return model_; }

  Matrix slack_inverse(const OracleContext& ctx) override;
  Matrix hessian(const OracleContext& ctx, const Matrix& slack_inv_tilde) override;
  Vector gradient(const OracleContext& ctx, const Matrix& slack_inv_tilde, double eta_new) override;
  Vector delta(const OracleContext& ctx, const Matrix& hessian_tilde, const Vector& g_tilde) override;

 private:
  void refresh_levels(const OracleContext& ctx);

  NoiseModel model_;
  Rng rng_;
};

// Building blocks, usable on their own ---------------------------------------

/// S⁻¹ for SPD S. Throws NotPositiveDefinite.
Matrix exact_slack_inverse(const Matrix& s);

struct SlackInverseDraw {
  Matrix slack_inv_tilde;
  double frobenius_error = 0.0;
  double spectral_error = 0.0;
};

/// S⁻¹ + E with E symmetric Gaussian, rescaled so that both
/// ‖E‖_F ≤ level·‖S⁻¹‖_F and (1 − level)S⁻¹ ⪯ S⁻¹ + E ⪯ (1 + level)S⁻¹.
/// Requires level < 1. Throws RescaleFailure after 20 degenerate draws.
SlackInverseDraw noisy_slack_inverse(const Matrix& s, double level, Rng& rng);

/// M + E with ‖M^{-1/2} E M^{-1/2}‖₂ ≤ level (and, when frobenius_level is
/// given, ‖E‖_F ≤ frobenius_level·‖M‖_F). M must be SPD.
Matrix sandwich_perturbation(const Matrix& m, double level, double frobenius_level, Rng& rng);

/// reference + τ·‖reference‖₂·u with u a uniformly random unit vector.
Vector perturb_relative(const Vector& reference, double tau, Rng& rng);

/// g(S⁻¹_ref) = η·b − 𝖠 vec(S⁻¹_ref) perturbed by relative ℓ₂ error τ.
Vector noisy_gradient(const SdpInstance& inst, const Matrix& slack_inv_ref, double eta, double tau,
                      Rng& rng);

/// −H̃⁻¹g̃ perturbed by relative ℓ₂ error τ. Throws SingularHessian.
Vector noisy_delta(const Matrix& hessian_tilde, const Vector& g_tilde, double tau, Rng& rng);

}  // namespace qsdp
