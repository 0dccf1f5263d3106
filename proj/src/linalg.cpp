#include "qsdp/linalg.hpp"

#include "qsdp/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qsdp {
namespace linalg {

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

Vector vec(const Matrix& m) {
  Vector out(m.size());
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) out[k++] = m(i, j);
  }
  return out;
}

Matrix mat(const Vector& v, Eigen::Index n) {
  if (v.size() != n * n) {
    throw Error(ErrorKind::InvalidInput, "mat: vector length " + std::to_string(v.size()) +
                                             " is not " + std::to_string(n) + "^2");
  }
  Matrix out(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) out(i, j) = v[k++];
  }
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b, std::size_t max_entries) {
  const auto rows = static_cast<std::size_t>(a.rows()) * static_cast<std::size_t>(b.rows());
  const auto cols = static_cast<std::size_t>(a.cols()) * static_cast<std::size_t>(b.cols());
  if (cols != 0 && rows > max_entries / cols) {
    throw Error(ErrorKind::InstanceTooLarge,
                "kron result " + std::to_string(rows) + "x" + std::to_string(cols) +
                    " exceeds " + std::to_string(max_entries) + " entries");
  }
  Matrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

SymEig sym_eig(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::InvalidInput, "sym_eig: matrix is not square");
  }
  const double scale = m.norm();
  if ((m - m.transpose()).norm() > 1e-8 * scale) {
    throw Error(ErrorKind::InvalidInput, "sym_eig: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(m));
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NumericalFailure, "sym_eig: QL iteration did not converge");
  }
  // Eigen returns ascending order.
  SymEig out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

Matrix psd_power(const Matrix& m, double p, double floor) {
  const SymEig eig = sym_eig(m);
  const double lambda_min = eig.values.size() ? eig.values.minCoeff() : 0.0;
  if (!(lambda_min >= floor)) {
    throw Error(ErrorKind::NotPositiveDefinite,
                "smallest eigenvalue " + std::to_string(lambda_min) + " is below " +
                    std::to_string(floor));
  }
  const Vector powered = eig.values.unaryExpr([p](double x) { return std::pow(x, p); });
  return symmetrize(eig.vectors * powered.asDiagonal() * eig.vectors.transpose());
}

namespace {

Vector singular_values(const Matrix& m) {
  if (m.rows() <= 32 && m.cols() <= 32) {
    return Eigen::JacobiSVD<Matrix>(m).singularValues();
  }
  return Eigen::BDCSVD<Matrix>(m).singularValues();
}

}  // namespace

double condition_number(const Matrix& m) {
  const Vector sv = singular_values(m);
  if (sv.size() == 0 || sv[0] == 0.0) {
    throw Error(ErrorKind::InvalidInput, "condition_number: zero matrix");
  }
  const double smax = sv[0];
  const double smin = sv[sv.size() - 1];
  if (smin < 1e-14 * smax) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)[0];
}

double row_power_sum(const Matrix& a, double q) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double x = std::abs(a(i, j));
      if (x != 0.0) sum += std::pow(x, q);
    }
    best = std::max(best, sum);
  }
  return best;
}

std::vector<double> default_mu_grid() {
  std::vector<double> grid;
  for (int k = 0; k <= 20; ++k) grid.push_back(0.05 * k);
  return grid;
}

double mu_param(const Matrix& a, std::span<const double> p_grid) {
  if (p_grid.empty()) {
    throw Error(ErrorKind::InvalidInput, "mu_param: empty p grid");
  }
  double best = a.norm();
  const Matrix at = a.transpose();
  for (const double p : p_grid) {
    const double candidate = std::sqrt(row_power_sum(a, 2.0 * p) * row_power_sum(at, 1.0 - 2.0 * p));
    best = std::min(best, candidate);
  }
  return best;
}

double mu_param(const Matrix& a) {
  const auto grid = default_mu_grid();
  return mu_param(a, grid);
}

Matrix pinv(const Matrix& m) {
  if (m.size() == 0) return m.transpose();
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  const double cutoff = 1e-12 * (sv.size() ? sv[0] : 0.0);
  Vector inv(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) inv[i] = sv[i] > cutoff ? 1.0 / sv[i] : 0.0;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

double pinv_spectral_bound(const Matrix& a, const Matrix& b) {
  const double pa = spectral_norm(pinv(a));
  const double pb = spectral_norm(pinv(b));
  return std::sqrt(2.0) * std::max(pa * pa, pb * pb) * spectral_norm(b - a);
}

double pinv_frobenius_bound(const Matrix& a, const Matrix& b) {
  const double pa = spectral_norm(pinv(a));
  const double pb = spectral_norm(pinv(b));
  return std::max(pa * pa, pb * pb) * (b - a).norm();
}

double pinv_frobenius_bound_equal_rank(const Matrix& a, const Matrix& b) {
  return spectral_norm(pinv(a)) * spectral_norm(pinv(b)) * (b - a).norm();
}

Vector relative_spectrum(const Matrix& base, const Matrix& other) {
  const Matrix root_inv = psd_power(base, -0.5);
  return sym_eig(symmetrize(root_inv * symmetrize(other) * root_inv)).values;
}

double loewner_factor(const Matrix& base, const Matrix& other) {
  const Vector lambda = relative_spectrum(base, other);
  const double lo = lambda.minCoeff();
  if (!(lo > 0.0)) {
    throw Error(ErrorKind::NotComparable,
                "generalized eigenvalue " + std::to_string(lo) + " is not positive");
  }
  return std::max(lambda.maxCoeff(), 1.0 / lo);
}

Vector spd_solve(const SymEig& eig, const Vector& rhs) {
  const double lmax = eig.values.maxCoeff();
  const double lmin = eig.values.minCoeff();
  if (!(lmin >= 1e-14 * lmax) || !(lmax > 0.0)) {
    throw Error(ErrorKind::SingularHessian, "λ_min/λ_max = " + std::to_string(lmin / lmax));
  }
  const Vector coeffs = (eig.vectors.transpose() * rhs).cwiseQuotient(eig.values);
  return eig.vectors * coeffs;
}

Vector spd_solve(const Matrix& m, const Vector& rhs) { return spd_solve(sym_eig(m), rhs); }

double local_norm(const Matrix& m, const Vector& v) {
  return std::sqrt(std::max(0.0, v.dot(symmetrize(m) * v)));
}

double dual_local_norm(const Matrix& m, const Vector& v) {
  return std::sqrt(std::max(0.0, v.dot(spd_solve(m, v))));
}

}  // namespace linalg
}  // namespace qsdp
