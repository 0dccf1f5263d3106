#pragma once

// Robust dual barrier method. Each iteration raises η by (1 + ε_N/(20√n)),
// asks the oracle for S̃⁻¹, H̃, g̃ and δ̃, moves y ← y + δ̃, and audits the
// four approximation conditions in the exact local norms together with the
// Newton-decrement invariant and the per-step slack invariant.

#include "qsdp/instance.hpp"
#include "qsdp/oracle.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qsdp {

struct SolverParams {
  double eps = 0.01;
  double eps_newton = 0.1;
  std::optional<std::int64_t> max_iters;
  std::int64_t verify_every = 1;
  /// Closeness constant for the audited conditions (α_S, α_H ≤ 1 + c0,
  /// ε_g, ε_δ ≤ c0).
  double c0 = 1e-4;
  /// Stop as soon as n(1 + 2ε_N)/η ≤ ε².
  bool early_exit = true;

  /// 0 < eps ≤ 0.01, √eps ≤ eps_newton ≤ 0.1, verify_every ≥ 1.
  void validate() const;
};

struct Schedule {
  double eta0 = 0.0;
  std::int64_t iterations = 0;
  double step_factor = 1.0;  // 1 + ε_N / (20√n)
};

/// eta0 = 1/(n+2), T = ⌈40·ε_N⁻¹·√n·ln(n/ε)⌉.
Schedule schedule(Eigen::Index n, double eps, double eps_newton);

struct ConditionCheck {
  double measured = 0.0;
  double bound = 0.0;
  bool pass = true;
};

struct ConditionReport {
  ConditionCheck slack;     // loewner_factor(S(y)⁻¹, S̃⁻¹) ≤ 1 + c0
  ConditionCheck hessian;   // loewner_factor(H(S̃), H̃) ≤ 1 + c0
  ConditionCheck gradient;  // ‖g̃ − g‖_{H⁻¹} / ‖g‖_{H⁻¹} ≤ c0
  ConditionCheck delta;     // ‖δ̃ + H̃⁻¹g̃‖_H / ‖H̃⁻¹g̃‖_H ≤ c0

  bool all_pass() const { return slack.pass && hessian.pass && gradient.pass && delta.pass; }
};

ConditionReport check_conditions(const SdpInstance& inst, const Vector& y, double eta_new,
                                 const Matrix& slack_inv_tilde, const Matrix& hessian_tilde,
                                 const Vector& g_tilde, const Vector& delta_tilde, double c0);

/// Same audit with the exact quantities at y already evaluated.
ConditionReport check_conditions(const SdpInstance& inst, const PointEvaluation& point, double eta_new,
                                 const Matrix& slack_inv_tilde, const Matrix& hessian_tilde,
                                 const Vector& g_tilde, const Vector& delta_tilde, double c0);

/// ‖S_old^{-1/2} S_new S_old^{-1/2} − I‖_F.
double slack_invariant(const Matrix& slack_old, const Matrix& slack_new);

struct IterationRecord {
  std::int64_t index = 0;
  double eta = 0.0;
  double eta_new = 0.0;
  Vector y;  // iterate before the step
  Matrix slack_inv_tilde;
  Matrix hessian_tilde;
  Vector g_tilde;
  Vector delta_tilde;
  bool audited = false;
  double kappa_hessian = 0.0;
  double potential_before = 0.0;
  ConditionCheck potential_after;  // ‖g(y_new, η_new)‖_{H(y_new)⁻¹} ≤ ε_N
  ConditionCheck slack_step;       // slack invariant ≤ 1.1 ε_N
  ConditionReport conditions;
  double objective = 0.0;  // bᵀy_new
  EffectiveLevels levels;
  InjectedErrors injected;

  bool pass() const { return !audited || (conditions.all_pass() && potential_after.pass && slack_step.pass); }
};

enum class SolveStatus { Converged, MaxIters, ConditionViolated, NumericalFailure };

std::string_view to_string(SolveStatus status);

struct SolveResult {
  Vector y_final;
  double eta_final = 0.0;
  double objective = 0.0;
  double gap_bound = 0.0;         // n(1 + 2ε_N)/η_final
  double gap_surrogate = 0.0;     // n/η_final
  std::int64_t iterations = 0;
  std::int64_t planned_iterations = 0;
  SolveStatus status = SolveStatus::NumericalFailure;
  std::string message;
  std::vector<IterationRecord> trace;
};

struct StepResult {
  PointEvaluation next;
  double eta_new = 0.0;
  IterationRecord record;
};

/// One robust Newton step from an already evaluated, strictly feasible
/// point. Throws LeftCone if S(y + δ̃) is not strictly PD.
StepResult step(const SdpInstance& inst, const PointEvaluation& point, double eta,
                const SolverParams& params, Oracle& oracle, double kappa_flat,
                std::int64_t index = 0, bool audit = true);

/// Convenience overload over a DualState.
std::pair<DualState, IterationRecord> step(const SdpInstance& inst, const DualState& state,
                                           const SolverParams& params, Oracle& oracle);

struct SolveOptions {
  bool keep_trace = true;
  std::function<void(const IterationRecord&)> on_record;
};

/// Runs the barrier method from y0 at eta0 = 1/(n+2). Throws InitNotOnPath
/// when the starting Newton decrement exceeds ε_N. Numerical failures and
/// audit failures end the run with the matching status.
SolveResult solve(const SdpInstance& inst, const Vector& y0, const SolverParams& params, Oracle& oracle,
                  const SolveOptions& options = {});

/// Offline re-audit of a recorded run.
struct TraceFailure {
  std::int64_t index = 0;
  std::vector<std::string> checks;
};

struct TraceAudit {
  std::int64_t records = 0;
  std::vector<TraceFailure> failures;
  bool passed() const { return failures.empty(); }
};

/// Recomputes every condition, the Newton-decrement invariant and the slack
/// invariant from the recorded oracle outputs, and checks that consecutive
/// records chain (y_{k+1} = y_k + δ̃_k, η_{k+1} = η_k^new).
TraceAudit audit_trace(const SdpInstance& inst, const std::vector<IterationRecord>& trace,
                       const SolverParams& params);

}  // namespace qsdp
