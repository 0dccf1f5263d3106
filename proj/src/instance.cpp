#include "qsdp/instance.hpp"

#include "qsdp/error.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace qsdp {

namespace {

void require_symmetric(const Matrix& a, const std::string& name) {
  if ((a - a.transpose()).norm() > 1e-10 * std::max(a.norm(), 1e-300)) {
    throw Error(ErrorKind::InvalidInput, name + " is not symmetric");
  }
}

}  // namespace

SdpInstance::SdpInstance(std::vector<Matrix> constraints, Vector b, Matrix c)
    : constraints_(std::move(constraints)), b_(std::move(b)), c_(std::move(c)) {
  const Eigen::Index n = c_.rows();
  if (n < 1 || c_.cols() != n) throw Error(ErrorKind::InvalidInput, "C must be a nonempty square matrix");
  if (constraints_.empty()) throw Error(ErrorKind::InvalidInput, "at least one constraint is required");
  if (static_cast<std::size_t>(b_.size()) != constraints_.size()) {
    throw Error(ErrorKind::InvalidInput, "b has " + std::to_string(b_.size()) + " entries but there are " +
                                             std::to_string(constraints_.size()) + " constraints");
  }
  require_symmetric(c_, "C");
  if (!c_.allFinite() || !b_.allFinite()) throw Error(ErrorKind::InvalidInput, "non-finite entry in C or b");
  flat_.resize(static_cast<Eigen::Index>(constraints_.size()), n * n);
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    const Matrix& a = constraints_[i];
    const std::string name = "A[" + std::to_string(i) + "]";
    if (a.rows() != n || a.cols() != n) throw Error(ErrorKind::InvalidInput, name + " is not n x n");
    if (!a.allFinite()) throw Error(ErrorKind::InvalidInput, name + " has a non-finite entry");
    require_symmetric(a, name);
    flat_.row(static_cast<Eigen::Index>(i)) = linalg::vec(a).transpose();
  }
}

SdpInstance SdpInstance::scaled(double t) const {
  std::vector<Matrix> a;
  a.reserve(constraints_.size());
  for (const Matrix& ai : constraints_) a.push_back(t * ai);
  return SdpInstance(std::move(a), b_, t * c_);
}

bool operator==(const SdpInstance& a, const SdpInstance& b) {
  if (a.n() != b.n() || a.m() != b.m()) return false;
  if (a.b_ != b.b_ || a.c_ != b.c_) return false;
  for (std::size_t i = 0; i < a.constraints_.size(); ++i) {
    if (a.constraints_[i] != b.constraints_[i]) return false;
  }
  return true;
}

Matrix slack(const SdpInstance& inst, const Vector& y) {
  if (y.size() != inst.m()) {
    throw Error(ErrorKind::InvalidInput, "y has length " + std::to_string(y.size()) + ", expected " +
                                             std::to_string(inst.m()));
  }
  Matrix s = -inst.c();
  for (Eigen::Index i = 0; i < inst.m(); ++i) s += y[i] * inst.constraint(i);
  return linalg::symmetrize(s);
}

bool strictly_feasible(const Matrix& s, double floor) {
  return linalg::sym_eig(s).values.minCoeff() > floor;
}

DualState make_state(const SdpInstance& inst, const Vector& y, double eta) {
  DualState state;
  state.y = y;
  state.eta = eta;
  state.slack = slack(inst, y);
  state.strictly_feasible = strictly_feasible(state.slack);
  return state;
}

Vector gradient(const SdpInstance& inst, const Matrix& slack_inv, double eta) {
  Vector g = eta * inst.b() - inst.flat() * linalg::vec(slack_inv);
#ifndef NDEBUG
  const Vector check = gradient_by_traces(inst, slack_inv, eta);
  assert((g - check).norm() <= 1e-9 * std::max({1.0, g.norm(), check.norm()}));
#endif
  return g;
}

Vector gradient_by_traces(const SdpInstance& inst, const Matrix& slack_inv, double eta) {
  Vector g(inst.m());
  for (Eigen::Index j = 0; j < inst.m(); ++j) {
    g[j] = eta * inst.b()[j] - (slack_inv * inst.constraint(j)).trace();
  }
  return g;
}

Matrix hessian(const SdpInstance& inst, const Matrix& slack_inv, HessianPath path) {
  const Eigen::Index m = inst.m();
  if (path == HessianPath::Automatic) {
    path = m * inst.n() <= 2000 ? HessianPath::Trace : HessianPath::Kronecker;
  }
  if (path == HessianPath::Kronecker) {
    const Matrix root = linalg::psd_power(slack_inv, 0.5);
    const Matrix w = inst.flat() * linalg::kron(root, root);
    return linalg::symmetrize(w * w.transpose());
  }
  std::vector<Matrix> products;
  products.reserve(static_cast<std::size_t>(m));
  for (Eigen::Index j = 0; j < m; ++j) products.push_back(slack_inv * inst.constraint(j));
  Matrix h(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const Matrix& pj = products[static_cast<std::size_t>(j)];
    for (Eigen::Index k = j; k < m; ++k) {
      const Matrix& pk = products[static_cast<std::size_t>(k)];
      h(j, k) = h(k, j) = pj.cwiseProduct(pk.transpose()).sum();
    }
  }
  return h;
}

Matrix exact_slack_inverse_at(const SdpInstance& inst, const Vector& y) {
  const Matrix s = slack(inst, y);
  try {
    return linalg::psd_power(s, -1.0);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotPositiveDefinite) {
      throw Error(ErrorKind::NotStrictlyFeasible, "S(y) is not positive definite");
    }
    throw;
  }
}

PointEvaluation evaluate_point(const SdpInstance& inst, const Vector& y) {
  PointEvaluation pt;
  pt.y = y;
  pt.slack = slack(inst, y);
  pt.slack_inv = exact_slack_inverse_at(inst, y);
  pt.hessian = hessian(inst, pt.slack_inv);
  pt.hessian_eig = linalg::sym_eig(pt.hessian);
  const double lmax = pt.hessian_eig.values.maxCoeff();
  const double lmin = pt.hessian_eig.values.minCoeff();
  pt.kappa_hessian = lmin > 1e-14 * lmax ? lmax / lmin : std::numeric_limits<double>::infinity();
  return pt;
}

double potential(const SdpInstance& inst, const Vector& y, double eta) {
  const Matrix s_inv = exact_slack_inverse_at(inst, y);
  const Vector g = gradient(inst, s_inv, eta);
  const Matrix h = hessian(inst, s_inv);
  return linalg::dual_local_norm(h, g);
}

double barrier_value(const SdpInstance& inst, const Vector& y, double eta) {
  const Matrix s = slack(inst, y);
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  return eta * inst.b().dot(y) - log_det;
}

double dual_objective(const SdpInstance& inst, const Vector& y) { return inst.b().dot(y); }

DualityReport duality_report(const SdpInstance& inst, const Vector& y, double eta, double eps_newton) {
  DualityReport report;
  report.objective = dual_objective(inst, y);
  report.eta = eta;
  const double n = static_cast<double>(inst.n());
  report.gap_surrogate = n / eta;
  report.gap_surrogate_robust = n * (1.0 + 2.0 * eps_newton) / eta;
  return report;
}

// Case 1 -----------------------------------------------------------------

SdpInstance gen_case1(Eigen::Index m) {
  if (m < 1) throw Error(ErrorKind::InvalidInput, "case 1 needs m >= 1");
  std::vector<Matrix> a;
  for (Eigen::Index i = 0; i < m; ++i) {
    Matrix ai = Matrix::Zero(m, m);
    ai(i, i) = -1.0;
    a.push_back(std::move(ai));
  }
  return SdpInstance(std::move(a), Vector::Constant(m, -1.0), Matrix::Zero(m, m));
}

Vector case1_central_path(Eigen::Index m, double eta) { return Vector::Constant(m, -1.0 / eta); }

SeededInstance seeded_case1(Eigen::Index m) {
  const double eta0 = initial_eta(m);
  return {gen_case1(m), case1_central_path(m, eta0), eta0};
}

// Case 2 -----------------------------------------------------------------

SdpInstance gen_case2() {
  Matrix c = Matrix::Zero(3, 3);
  c(2, 2) = -1.0;
  Matrix a1 = Matrix::Zero(3, 3);
  a1(0, 0) = -1.0;
  Matrix a2 = Matrix::Zero(3, 3);
  a2(1, 1) = -1.0;
  Matrix a3 = Matrix::Zero(3, 3);
  a3(0, 1) = a3(1, 0) = -1.0;
  Vector b(3);
  b << -1.0, -1.0, 0.0;
  return SdpInstance({a1, a2, a3}, b, c);
}

Vector case2_central_path(double eta) {
  Vector y(3);
  y << -1.0 / eta, -1.0 / eta, 0.0;
  return y;
}

SeededInstance seeded_case2() {
  const double eta0 = initial_eta(3);
  return {gen_case2(), case2_central_path(eta0), eta0};
}

// Random well-conditioned instances ---------------------------------------

SeededInstance gen_random_wellcond(Eigen::Index n, Eigen::Index m, double target_kappa,
                                   std::uint64_t seed) {
  if (n < 1 || m < 1) throw Error(ErrorKind::InvalidInput, "n and m must be positive");
  if (m > n * n) throw Error(ErrorKind::InvalidInput, "m must not exceed n^2");
  if (!(target_kappa >= 1.0)) throw Error(ErrorKind::InvalidInput, "target_kappa must be >= 1");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto gaussian = [&](Eigen::Index rows, Eigen::Index cols) {
    Matrix g(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = normal(rng);
    }
    return g;
  };

  std::vector<Matrix> a;
  bool independent = false;
  for (int attempt = 0; attempt < 10 && !independent; ++attempt) {
    a.clear();
    Matrix flat(m, n * n);
    for (Eigen::Index i = 0; i < m; ++i) {
      a.push_back(linalg::symmetrize(gaussian(n, n)));
      flat.row(i) = linalg::vec(a.back()).transpose();
    }
    independent = linalg::condition_number(flat) < 1e8;
  }
  if (!independent) {
    throw Error(ErrorKind::RankDeficientConstraints,
                "no linearly independent constraint set after 10 draws");
  }

  Vector y0(m);
  for (Eigen::Index i = 0; i < m; ++i) y0[i] = normal(rng);

  const Eigen::HouseholderQR<Matrix> qr(gaussian(n, n));
  const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector spectrum(n);
  for (Eigen::Index i = 0; i < n; ++i) spectrum[i] = std::pow(target_kappa, unit(rng));
  const Matrix s0 = linalg::symmetrize(q * spectrum.asDiagonal() * q.transpose());

  Matrix c = -s0;
  for (Eigen::Index i = 0; i < m; ++i) c += y0[i] * a[static_cast<std::size_t>(i)];
  c = linalg::symmetrize(c);

  const double eta0 = initial_eta(n);
  // Recompute S from the stored data so that g(y0, eta0) vanishes for the
  // slack the solver will actually see.
  std::vector<Matrix> a_copy = a;
  const SdpInstance probe(std::move(a_copy), Vector::Zero(m), c);
  const Matrix s0_inv = linalg::psd_power(slack(probe, y0), -1.0);
  const Vector b = probe.flat() * linalg::vec(s0_inv) / eta0;

  return {SdpInstance(std::move(a), b, c), y0, eta0};
}

}  // namespace qsdp
