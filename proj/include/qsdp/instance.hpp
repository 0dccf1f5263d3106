#pragma once

// SDP data model in dual form:
//
//   min_y  bᵀy   subject to   S(y) = Σ_i y_i A_i − C ⪰ 0.
//
// Barrier quantities follow f(y) = η·bᵀy − log det S(y):
//   g(y, η)    = η·b − 𝖠·vec(S⁻¹)
//   H(y)_{jk}  = tr(S⁻¹ A_j S⁻¹ A_k)
// where row i of 𝖠 is vec(A_i)ᵀ.

#include "qsdp/linalg.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace qsdp {

class SdpInstance {
 public:
  /// Validates dimensions and symmetry (1e-10 relative Frobenius) and builds
  /// the flattened constraint matrix. Throws InvalidInput.
  SdpInstance(std::vector<Matrix> constraints, Vector b, Matrix c);

  Eigen::Index n() const { return c_.rows(); }
  Eigen::Index m() const { return b_.size(); }
  const std::vector<Matrix>& constraints() const { return constraints_; }
  const Matrix& constraint(Eigen::Index i) const { return constraints_[static_cast<std::size_t>(i)]; }
  const Vector& b() const { return b_; }
  const Matrix& c() const { return c_; }
  /// m × n² matrix whose row i is vec(A_i).
  const Matrix& flat() const { return flat_; }

  /// Copy with every A_i and C multiplied by t (b unchanged).
  SdpInstance scaled(double t) const;

  friend bool operator==(const SdpInstance& a, const SdpInstance& b);

 private:
  std::vector<Matrix> constraints_;
  Vector b_;
  Matrix c_;
  Matrix flat_;
};

struct DualState {
  Vector y;
  double eta = 0.0;
  Matrix slack;
  bool strictly_feasible = false;
};

DualState make_state(const SdpInstance& inst, const Vector& y, double eta);

/// S(y) = Σ y_i A_i − C, symmetrized.
Matrix slack(const SdpInstance& inst, const Vector& y);

bool strictly_feasible(const Matrix& s, double floor = linalg::kPsdFloor);

/// η·b − 𝖠·vec(S⁻¹), evaluated from a given (possibly approximate) S⁻¹.
Vector gradient(const SdpInstance& inst, const Matrix& slack_inv, double eta);

/// Same quantity through the trace form η·b_j − tr(S⁻¹ A_j).
Vector gradient_by_traces(const SdpInstance& inst, const Matrix& slack_inv, double eta);

enum class HessianPath { Automatic, Trace, Kronecker };

/// H = 𝖠 (S⁻¹ ⊗ S⁻¹) 𝖠ᵀ. The trace path evaluates tr(S⁻¹A_jS⁻¹A_k); the
/// Kronecker path forms W = 𝖠 (S^{-1/2} ⊗ S^{-1/2}) and returns WWᵀ.
/// Automatic picks the trace path while m·n ≤ 2000.
Matrix hessian(const SdpInstance& inst, const Matrix& slack_inv,
               HessianPath path = HessianPath::Automatic);

/// Exact S(y)⁻¹; throws NotStrictlyFeasible when S(y) is not PD.
Matrix exact_slack_inverse_at(const SdpInstance& inst, const Vector& y);

/// Exact slack, inverse and Hessian at one dual point, shared by the oracles
/// and the condition audits.
struct PointEvaluation {
  Vector y;
  Matrix slack;
  Matrix slack_inv;
  Matrix hessian;
  linalg::SymEig hessian_eig;
  double kappa_hessian = 1.0;
};

/// Throws NotStrictlyFeasible when S(y) is not PD.
PointEvaluation evaluate_point(const SdpInstance& inst, const Vector& y);

/// Newton decrement ‖g(y, η)‖_{H(y)⁻¹} with exact S⁻¹ and H.
double potential(const SdpInstance& inst, const Vector& y, double eta);

/// η·bᵀy − log det S(y); +∞ outside the cone.
double barrier_value(const SdpInstance& inst, const Vector& y, double eta);

double dual_objective(const SdpInstance& inst, const Vector& y);

struct DualityReport {
  double objective = 0.0;
  double eta = 0.0;
  double gap_surrogate = 0.0;         // n / η
  double gap_surrogate_robust = 0.0;  // n (1 + 2 ε_N) / η
};

DualityReport duality_report(const SdpInstance& inst, const Vector& y, double eta, double eps_newton);

/// An instance together with a strictly feasible starting point that is on
/// (or within the Newton budget of) the central path at eta0 = 1/(n+2).
struct SeededInstance {
  SdpInstance instance;
  Vector y0;
  double eta0;
};

/// max Σ y_i s.t. y_i ≤ 0, rewritten in min form: n = m, A_i = −e_i e_iᵀ,
/// C = 0, b = −1. Optimal value 0 at y = 0.
SdpInstance gen_case1(Eigen::Index m);
Vector case1_central_path(Eigen::Index m, double eta);
SeededInstance seeded_case1(Eigen::Index m);

/// The fixed 3×3, three-constraint instance with κ(H) = 2 along the central
/// path. Optimal value 0 at y = 0.
SdpInstance gen_case2();
Vector case2_central_path(double eta);
SeededInstance seeded_case2();

/// Random symmetric constraints with linearly independent vec rows. C and b
/// are chosen so that y0 is strictly feasible with κ(S(y0)) ≤ target_kappa
/// and g(y0, eta0) = 0. Throws RankDeficientConstraints after 10 draws.
SeededInstance gen_random_wellcond(Eigen::Index n, Eigen::Index m, double target_kappa,
                                   std::uint64_t seed);

inline double initial_eta(Eigen::Index n) { return 1.0 / static_cast<double>(n + 2); }

}  // namespace qsdp
