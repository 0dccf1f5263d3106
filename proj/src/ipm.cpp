#include "qsdp/ipm.hpp"

#include "qsdp/error.hpp"

#include <cmath>
#include <limits>

namespace qsdp {

namespace {

constexpr double kPotentialSlack = 1e-9;

ConditionCheck make_check(double measured, double bound) {
  return {measured, bound, measured <= bound};
}

double ratio(double num, double den) {
  if (num == 0.0) return 0.0;
  return den == 0.0 ? std::numeric_limits<double>::infinity() : num / den;
}

double guarded_loewner(const Matrix& base, const Matrix& other) {
  try {
    return linalg::loewner_factor(base, other);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotComparable || e.kind() == ErrorKind::NotPositiveDefinite) {
      return std::numeric_limits<double>::infinity();
    }
    throw;
  }
}

double dual_norm(const linalg::SymEig& eig, const Vector& v) {
  return std::sqrt(std::max(0.0, v.dot(linalg::spd_solve(eig, v))));
}

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)); }

}  // namespace

void SolverParams::validate() const {
  if (!(eps > 0.0 && eps <= 0.01)) throw Error(ErrorKind::InvalidInput, "eps must lie in (0, 0.01]");
  // The boundary √ε = ε_N is admitted: the standard pair (0.01, 0.1) sits on it.
  if (!(eps_newton >= std::sqrt(eps) * (1.0 - 1e-12) && eps_newton <= 0.1)) {
    throw Error(ErrorKind::InvalidInput, "eps_N must satisfy sqrt(eps) <= eps_N <= 0.1");
  }
  if (verify_every < 1) throw Error(ErrorKind::InvalidInput, "verify_every must be >= 1");
  if (max_iters && *max_iters < 0) throw Error(ErrorKind::InvalidInput, "max_iters must be >= 0");
  if (!(c0 > 0.0)) throw Error(ErrorKind::InvalidInput, "c0 must be positive");
}

Schedule schedule(Eigen::Index n, double eps, double eps_newton) {
  const double dn = static_cast<double>(n);
  Schedule s;
  s.eta0 = initial_eta(n);
  s.iterations = static_cast<std::int64_t>(std::ceil(40.0 / eps_newton * std::sqrt(dn) * std::log(dn / eps)));
  s.step_factor = 1.0 + eps_newton / (20.0 * std::sqrt(dn));
  return s;
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::MaxIters: return "MaxIters";
    case SolveStatus::ConditionViolated: return "ConditionViolated";
    case SolveStatus::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

ConditionReport check_conditions(const SdpInstance& inst, const PointEvaluation& point, double eta_new,
                                 const Matrix& slack_inv_tilde, const Matrix& hessian_tilde,
                                 const Vector& g_tilde, const Vector& delta_tilde, double c0) {
  ConditionReport report;
  report.slack = make_check(guarded_loewner(point.slack_inv, slack_inv_tilde), 1.0 + c0);
  report.hessian = make_check(guarded_loewner(hessian(inst, slack_inv_tilde), hessian_tilde), 1.0 + c0);

  const Vector g = gradient(inst, point.slack_inv, eta_new);
  report.gradient =
      make_check(ratio(dual_norm(point.hessian_eig, g_tilde - g), dual_norm(point.hessian_eig, g)), c0);

  Vector newton = Vector::Zero(g_tilde.size());
  if (!g_tilde.isZero(0.0)) newton = linalg::spd_solve(hessian_tilde, g_tilde);
  report.delta = make_check(
      ratio(linalg::local_norm(point.hessian, delta_tilde + newton), linalg::local_norm(point.hessian, newton)), c0);
  return report;
}

ConditionReport check_conditions(const SdpInstance& inst, const Vector& y, double eta_new,
                                 const Matrix& slack_inv_tilde, const Matrix& hessian_tilde,
                                 const Vector& g_tilde, const Vector& delta_tilde, double c0) {
  return check_conditions(inst, evaluate_point(inst, y), eta_new, slack_inv_tilde, hessian_tilde, g_tilde,
                          delta_tilde, c0);
}

double slack_invariant(const Matrix& slack_old, const Matrix& slack_new) {
  const Matrix root_inv = linalg::psd_power(slack_old, -0.5);
  const Matrix centered = linalg::symmetrize(root_inv * slack_new * root_inv);
  return (centered - Matrix::Identity(centered.rows(), centered.cols())).norm();
}

StepResult step(const SdpInstance& inst, const PointEvaluation& point, double eta, const SolverParams& params,
                Oracle& oracle, double kappa_flat, std::int64_t index, bool audit) {
  const double n = static_cast<double>(inst.n());
  const double eta_new = eta * (1.0 + params.eps_newton / (20.0 * std::sqrt(n)));

  const OracleContext ctx{inst, point, kappa_flat};
  Matrix slack_inv_tilde = oracle.slack_inverse(ctx);
  Matrix hessian_tilde = oracle.hessian(ctx, slack_inv_tilde);
  Vector g_tilde = oracle.gradient(ctx, slack_inv_tilde, eta_new);
  Vector delta_tilde = oracle.delta(ctx, hessian_tilde, g_tilde);

  const Vector y_new = point.y + delta_tilde;
  StepResult out;
  try {
    out.next = evaluate_point(inst, y_new);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotStrictlyFeasible) {
      throw Error(ErrorKind::LeftCone, "iteration " + std::to_string(index) + ": S(y + delta) left the PD cone");
    }
    throw;
  }
  out.eta_new = eta_new;

  IterationRecord& rec = out.record;
  rec.index = index;
  rec.eta = eta;
  rec.eta_new = eta_new;
  rec.y = point.y;
  rec.kappa_hessian = point.kappa_hessian;
  rec.objective = dual_objective(inst, y_new);
  rec.levels = oracle.levels();
  rec.injected = oracle.injected();
  rec.audited = audit;
  if (audit) {
    rec.potential_before = dual_norm(point.hessian_eig, gradient(inst, point.slack_inv, eta));
    rec.conditions = check_conditions(inst, point, eta_new, slack_inv_tilde, hessian_tilde, g_tilde, delta_tilde,
                                      params.c0);
    const double after = dual_norm(out.next.hessian_eig, gradient(inst, out.next.slack_inv, eta_new));
    rec.potential_after = {after, params.eps_newton, after <= params.eps_newton + kPotentialSlack};
    rec.slack_step = make_check(slack_invariant(point.slack, out.next.slack), 1.1 * params.eps_newton);
  }
  rec.slack_inv_tilde = std::move(slack_inv_tilde);
  rec.hessian_tilde = std::move(hessian_tilde);
  rec.g_tilde = std::move(g_tilde);
  rec.delta_tilde = std::move(delta_tilde);
  return out;
}

std::pair<DualState, IterationRecord> step(const SdpInstance& inst, const DualState& state,
                                           const SolverParams& params, Oracle& oracle) {
  const PointEvaluation point = evaluate_point(inst, state.y);
  StepResult res = step(inst, point, state.eta, params, oracle, linalg::condition_number(inst.flat()));
  DualState next;
  next.y = res.next.y;
  next.eta = res.eta_new;
  next.slack = res.next.slack;
  next.strictly_feasible = true;
  return {std::move(next), std::move(res.record)};
}

SolveResult solve(const SdpInstance& inst, const Vector& y0, const SolverParams& params, Oracle& oracle,
                  const SolveOptions& options) {
  params.validate();
  if (y0.size() != inst.m()) throw Error(ErrorKind::InvalidInput, "y0 has the wrong length");
  const Schedule sched = schedule(inst.n(), params.eps, params.eps_newton);

  PointEvaluation point;
  try {
    point = evaluate_point(inst, y0);
  } catch (const Error& e) {
    throw Error(ErrorKind::InitNotOnPath, std::string("initial point: ") + e.what());
  }
  const double start = dual_norm(point.hessian_eig, gradient(inst, point.slack_inv, sched.eta0));
  if (!(start <= params.eps_newton)) {
    throw Error(ErrorKind::InitNotOnPath, "initial Newton decrement " + std::to_string(start) + " exceeds eps_N");
  }

  const double kappa_flat = linalg::condition_number(inst.flat());
  const double n = static_cast<double>(inst.n());
  const std::int64_t limit = params.max_iters ? std::min(*params.max_iters, sched.iterations) : sched.iterations;

  SolveResult result;
  result.planned_iterations = sched.iterations;
  result.status = SolveStatus::Converged;
  double eta = sched.eta0;
  bool finished = false;
  std::int64_t k = 0;
  for (; k < limit && !finished; ++k) {
    const bool audit = k % params.verify_every == 0;
    StepResult res;
    try {
      res = step(inst, point, eta, params, oracle, kappa_flat, k, audit);
    } catch (const Error& e) {
      result.status = SolveStatus::NumericalFailure;
      result.message = e.what();
      break;
    }
    if (options.on_record) options.on_record(res.record);
    const bool ok = res.record.pass();
    if (options.keep_trace) result.trace.push_back(std::move(res.record));
    point = std::move(res.next);
    eta = res.eta_new;
    if (!ok) {
      result.status = SolveStatus::ConditionViolated;
      result.message = "audit failed at iteration " + std::to_string(k);
      ++k;
      break;
    }
    if (params.early_exit && n * (1.0 + 2.0 * params.eps_newton) / eta <= params.eps * params.eps) {
      finished = true;
    }
  }
  result.iterations = k;
  if (result.status == SolveStatus::Converged && !finished && k < sched.iterations) {
    result.status = SolveStatus::MaxIters;
  }
  result.y_final = point.y;
  result.eta_final = eta;
  result.objective = dual_objective(inst, point.y);
  result.gap_surrogate = n / eta;
  result.gap_bound = n * (1.0 + 2.0 * params.eps_newton) / eta;
  return result;
}

TraceAudit audit_trace(const SdpInstance& inst, const std::vector<IterationRecord>& trace,
                       const SolverParams& params) {
  TraceAudit audit;
  audit.records = static_cast<std::int64_t>(trace.size());
  const double factor = 1.0 + params.eps_newton / (20.0 * std::sqrt(static_cast<double>(inst.n())));
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const IterationRecord& rec = trace[k];
    TraceFailure failure{rec.index, {}};
    try {
      const PointEvaluation point = evaluate_point(inst, rec.y);
      if (!close(rec.eta_new, rec.eta * factor, 1e-12)) failure.checks.push_back("eta_schedule");
      const ConditionReport report = check_conditions(inst, point, rec.eta_new, rec.slack_inv_tilde,
                                                      rec.hessian_tilde, rec.g_tilde, rec.delta_tilde, params.c0);
      if (!report.slack.pass) failure.checks.push_back("slack_condition");
      if (!report.hessian.pass) failure.checks.push_back("hessian_condition");
      if (!report.gradient.pass) failure.checks.push_back("gradient_condition");
      if (!report.delta.pass) failure.checks.push_back("delta_condition");

      const Vector y_new = rec.y + rec.delta_tilde;
      try {
        const PointEvaluation next = evaluate_point(inst, y_new);
        const double after = dual_norm(next.hessian_eig, gradient(inst, next.slack_inv, rec.eta_new));
        if (!(after <= params.eps_newton + kPotentialSlack)) failure.checks.push_back("potential");
        if (!(slack_invariant(point.slack, next.slack) <= 1.1 * params.eps_newton)) {
          failure.checks.push_back("slack_invariant");
        }
      } catch (const Error&) {
        failure.checks.push_back("left_cone");
      }
      if (k + 1 < trace.size()) {
        const IterationRecord& nxt = trace[k + 1];
        const double scale = std::max(1.0, y_new.norm());
        if (nxt.y.size() != y_new.size() || (nxt.y - y_new).norm() > 1e-12 * scale) {
          failure.checks.push_back("chain_y");
        }
        if (!close(nxt.eta, rec.eta_new, 1e-15)) failure.checks.push_back("chain_eta");
      }
    } catch (const Error& e) {
      failure.checks.push_back(std::string("numerical: ") + e.what());
    }
    if (!failure.checks.empty()) audit.failures.push_back(std::move(failure));
  }
  return audit;
}

}  // namespace qsdp
