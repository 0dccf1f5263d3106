#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qsdp/error.hpp"
#include "qsdp/linalg.hpp"

#include <cmath>
#include <random>

using namespace qsdp;
using namespace qsdp::linalg;

namespace {

Matrix random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = normal(rng);
  return m;
}

Matrix random_symmetric(Eigen::Index n, std::mt19937_64& rng) { return symmetrize(random_matrix(n, n, rng)); }

Matrix diag(std::initializer_list<double> d) {
  Vector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v[i++] = x;
  return v.asDiagonal();
}

}  // namespace

TEST_CASE("vec stacks columns and mat inverts it") {
  Vector v = vec(Matrix::Identity(2, 2));
  CHECK(v == (Vector(4) << 1, 0, 0, 1).finished());

  Matrix m(2, 2);
  m << 1, 2, 3, 4;
  CHECK(vec(m) == (Vector(4) << 1, 3, 2, 4).finished());

  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    Matrix x = random_matrix(5, 5, rng);
    CHECK(mat(vec(x), 5) == x);
  }
}

TEST_CASE("kron") {
  CHECK(kron(Matrix::Identity(2, 2), Matrix::Identity(2, 2)) == Matrix::Identity(4, 4));

  Matrix a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 0, 1, 1, 0;
  Matrix expected(4, 4);
  expected << 0, 1, 0, 2,
              1, 0, 2, 0,
              0, 3, 0, 4,
              3, 0, 4, 0;
  CHECK(kron(a, b) == expected);

  CHECK_THROWS_AS(kron(Matrix::Ones(100, 100), Matrix::Ones(100, 100), 1000), Error);
}

TEST_CASE("kron vec identity on random matrices") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    Matrix a = random_matrix(3, 3, rng);
    Matrix x = random_matrix(3, 3, rng);
    Vector lhs = kron(a, a) * vec(x);
    Vector rhs = vec(a * x * a.transpose());
    CHECK((lhs - rhs).norm() <= 1e-10 * std::max(1.0, rhs.norm()));
  }
}

TEST_CASE("sym_eig") {
  SymEig e = sym_eig(diag({3, 1}));
  CHECK(e.values[0] == doctest::Approx(3));
  CHECK(e.values[1] == doctest::Approx(1));

  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  e = sym_eig(swap);
  CHECK(e.values[0] == doctest::Approx(1));
  CHECK(e.values[1] == doctest::Approx(-1));

  std::mt19937_64 rng(3);
  Matrix s = random_symmetric(8, rng);
  e = sym_eig(s);
  CHECK((e.vectors * e.values.asDiagonal() * e.vectors.transpose() - s).norm() <= 1e-12 * s.norm());
  for (Eigen::Index i = 1; i < 8; ++i) CHECK(e.values[i - 1] >= e.values[i]);

  Matrix asym(2, 2);
  asym << 1, 2, 0, 1;
  CHECK_THROWS_AS(sym_eig(asym), Error);
}

TEST_CASE("psd_power") {
  CHECK(psd_power(Matrix::Identity(3, 3), -1).isApprox(Matrix::Identity(3, 3), 1e-14));
  CHECK(psd_power(diag({4, 9}), 0.5).isApprox(diag({2, 3}), 1e-14));
  CHECK(psd_power(diag({0.04, 25}), -0.5).isApprox(diag({5, 0.2}), 1e-13));
  try {
    psd_power(diag({1, -1}), 0.5);
    FAIL("expected NotPositiveDefinite");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotPositiveDefinite);
  }
}

TEST_CASE("condition_number") {
  CHECK(condition_number(Matrix::Identity(4, 4)) == doctest::Approx(1.0));
  for (double eta : {0.3, 1.0, 7.5}) {
    CHECK(condition_number(diag({eta * eta, eta * eta, 2 * eta * eta})) == doctest::Approx(2.0).epsilon(1e-12));
  }
  CHECK(condition_number(diag({10, 0.1})) == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(std::isinf(condition_number(diag({1, 0}))));
}

TEST_CASE("mu_param") {
  CHECK(mu_param(Matrix::Identity(4, 4)) == doctest::Approx(1.0));
  Matrix e11 = Matrix::Zero(3, 3);
  e11(0, 0) = 1;
  CHECK(mu_param(e11) == doctest::Approx(1.0));
  CHECK(mu_param(Matrix::Ones(2, 2)) == doctest::Approx(2.0));

  // The grid minimum never exceeds the Frobenius candidate.
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    Matrix a = random_matrix(3, 7, rng);
    CHECK(mu_param(a) <= a.norm() * (1 + 1e-15));
  }
  CHECK(default_mu_grid().size() == 21);
}

TEST_CASE("pinv") {
  CHECK(pinv(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3)));
  CHECK(pinv(diag({2, 0})).isApprox(diag({0.5, 0})));
  std::mt19937_64 rng(17);
  Matrix m = random_matrix(4, 4, rng);
  CHECK(pinv(pinv(m)).isApprox(m, 1e-10));
}

TEST_CASE("pseudo-inverse perturbation: spectral bound over random full-rank pairs") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 200; ++t) {
    Matrix a = random_matrix(4, 4, rng);
    const double smin = Eigen::JacobiSVD<Matrix>(a).singularValues().minCoeff();
    Matrix e = random_matrix(4, 4, rng);
    e *= 0.1 * smin / spectral_norm(e) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    Matrix b = a + e;
    CHECK(spectral_norm(pinv(b) - pinv(a)) <= pinv_spectral_bound(a, b) * (1 + 1e-10));
  }
}

TEST_CASE("pseudo-inverse perturbation: Frobenius bounds") {
  std::mt19937_64 rng(4048);
  for (int t = 0; t < 200; ++t) {
    // Rank-2 4×4 pairs with a rank-preserving perturbation.
    Matrix l = random_matrix(4, 2, rng);
    Matrix r = random_matrix(4, 2, rng);
    Matrix a = l * r.transpose();
    Matrix b = (l + 0.05 * random_matrix(4, 2, rng)) * (r + 0.05 * random_matrix(4, 2, rng)).transpose();
    const double lhs = (pinv(b) - pinv(a)).norm();
    CHECK(lhs <= pinv_frobenius_bound_equal_rank(a, b) * (1 + 1e-9));
    CHECK(lhs <= pinv_frobenius_bound(a, b) * (1 + 1e-9));
  }

  SUBCASE("rank-changing worked case attains the general bound") {
    Matrix a = diag({1, 0});
    Matrix b = diag({1, 0.1});
    const double lhs = (pinv(b) - pinv(a)).norm();
    CHECK(std::abs(lhs - 10.0) <= 1e-12);
    CHECK(std::abs(pinv_frobenius_bound(a, b) - 10.0) <= 1e-12);
    // Ranks differ, so the equal-rank bound (= 1) does not apply.
    CHECK(pinv_frobenius_bound_equal_rank(a, b) < lhs);
  }
}

TEST_CASE("loewner_factor") {
  Matrix i3 = Matrix::Identity(3, 3);
  CHECK(loewner_factor(i3, 2 * i3) == doctest::Approx(2.0));
  std::mt19937_64 rng(9);
  Matrix q = random_matrix(4, 4, rng);
  Matrix s = q * q.transpose() + Matrix::Identity(4, 4);
  CHECK(loewner_factor(s, s) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(loewner_factor(diag({1, 4}), diag({1.1, 3.8})) == doctest::Approx(1.1).epsilon(1e-12));
  try {
    loewner_factor(i3, diag({1, 1, -1}));
    FAIL("expected NotComparable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotComparable);
  }
}

TEST_CASE("spd_solve and local norms") {
  Matrix m = diag({4, 1});
  Vector rhs = (Vector(2) << 2, 3).finished();
  CHECK(spd_solve(m, rhs).isApprox((Vector(2) << 0.5, 3).finished()));
  CHECK(local_norm(m, rhs) == doctest::Approx(std::sqrt(16.0 + 9.0)));
  CHECK(dual_local_norm(m, rhs) == doctest::Approx(std::sqrt(1.0 + 9.0)));
  try {
    spd_solve(diag({1, 0}), rhs);
    FAIL("expected SingularHessian");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularHessian);
  }
}
