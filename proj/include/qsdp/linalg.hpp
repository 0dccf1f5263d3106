#pragma once

// Dense real linear-algebra kernels shared by the solver, the oracles and
// the estimator. Everything here is a pure function of its arguments.

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace qsdp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace linalg {

/// Smallest eigenvalue accepted as "positive" by the PD checks.
inline constexpr double kPsdFloor = 1e-12;

/// Largest number of entries kron() will materialize.
inline constexpr std::size_t kMaxKronEntries = std::size_t{1} << 26;

struct SymEig {
  Vector values;   // descending
  Matrix vectors;  // orthonormal columns, matching `values`
};

/// (M + Mᵀ) / 2
Matrix symmetrize(const Matrix& m);

/// Column-stacking vectorization.
Vector vec(const Matrix& m);

/// Inverse of vec() for an n×n matrix; `v` must have n² entries.
Matrix mat(const Vector& v, Eigen::Index n);

/// Kronecker product. Throws InstanceTooLarge when the result would exceed
/// `max_entries`.
Matrix kron(const Matrix& a, const Matrix& b, std::size_t max_entries = kMaxKronEntries);

/// Eigendecomposition of a symmetric matrix, eigenvalues sorted descending.
/// The input is symmetrized first; a relative asymmetry above 1e-8 is
/// rejected as InvalidInput.
SymEig sym_eig(const Matrix& m);

/// Functional calculus M^p for symmetric positive definite M. Every
/// eigenvalue must be at least `floor`.
Matrix psd_power(const Matrix& m, double p, double floor = kPsdFloor);

/// σ_max / σ_min. Returns +∞ when σ_min < 1e-14·σ_max.
double condition_number(const Matrix& m);

double spectral_norm(const Matrix& m);

/// s_q(A) = max_i Σ_j |A_ij|^q over the nonzero entries of each row.
double row_power_sum(const Matrix& a, double q);

/// Default p grid {0, 0.05, …, 1}.
std::vector<double> default_mu_grid();

/// QRAM normalization parameter, minimized over a finite grid of p values.
/// The grid minimum upper-bounds the continuous one.
double mu_param(const Matrix& a, std::span<const double> p_grid);
double mu_param(const Matrix& a);

/// Moore–Penrose pseudo-inverse (singular values below 1e-12·σ_max are
/// treated as zero).
Matrix pinv(const Matrix& m);

/// Upper bounds on ‖B⁺ − A⁺‖ for a perturbation B = A + E.
/// Spectral norm: √2·max(‖A⁺‖², ‖B⁺‖²)·‖E‖₂.
double pinv_spectral_bound(const Matrix& a, const Matrix& b);
/// Frobenius norm, any ranks: max(‖A⁺‖², ‖B⁺‖²)·‖E‖_F.
double pinv_frobenius_bound(const Matrix& a, const Matrix& b);
/// Frobenius norm when rank(A) = rank(B): ‖A⁺‖₂·‖B⁺‖₂·‖E‖_F.
double pinv_frobenius_bound_equal_rank(const Matrix& a, const Matrix& b);

/// Smallest α ≥ 1 with α⁻¹·base ⪯ other ⪯ α·base. Throws NotComparable when
/// `other` has a nonpositive generalized eigenvalue against `base`.
double loewner_factor(const Matrix& base, const Matrix& other);

/// Generalized eigenvalues of `other` relative to SPD `base`, i.e. the
/// spectrum of base^{-1/2}·other·base^{-1/2}, descending.
Vector relative_spectrum(const Matrix& base, const Matrix& other);

/// Solves M x = rhs for symmetric positive definite M through its
/// eigendecomposition. Throws SingularHessian when λ_min < 1e-14·λ_max.
Vector spd_solve(const SymEig& eig, const Vector& rhs);
Vector spd_solve(const Matrix& m, const Vector& rhs);

/// √(vᵀ M v) for symmetric PSD M.
double local_norm(const Matrix& m, const Vector& v);

/// √(vᵀ M⁻¹ v) for symmetric PD M.
double dual_local_norm(const Matrix& m, const Vector& v);

}  // namespace linalg
}  // namespace qsdp
