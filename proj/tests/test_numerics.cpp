#include <doctest.h>

#include <algorithm>
#include <random>

#include "hplab/numerics.hpp"

using namespace hplab;

namespace {

MatrixXc random_hermitian(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  MatrixXc a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  return (a + a.adjoint()) / 2.0;
}

// Characteristic polynomial coefficients c_0..c_n of det(tI - A), c_n = 1,
// by the Faddeev-LeVerrier recursion.
std::vector<Complex> charpoly(const MatrixXc& a) {
  const Eigen::Index n = a.rows();
  std::vector<Complex> c(std::size_t(n + 1));
  c[std::size_t(n)] = 1;
  MatrixXc m = MatrixXc::Zero(n, n);
  const MatrixXc id = MatrixXc::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m + c[std::size_t(n - k + 1)] * id;
    c[std::size_t(n - k)] = -(a * m).trace() / double(k);
  }
  return c;
}

// All roots of a monic polynomial by Durand-Kerner iteration.
std::vector<Complex> poly_roots(const std::vector<Complex>& c) {
  const std::size_t n = c.size() - 1;
  std::vector<Complex> z(n);
  for (std::size_t k = 0; k < n; ++k) z[k] = std::pow(Complex(0.4, 0.9), double(k)) * 3.0;
  auto p = [&](Complex x) {
    Complex v = 0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
    return v;
  };
  for (int it = 0; it < 2000; ++it) {
    double move = 0;
    for (std::size_t i = 0; i < n; ++i) {
      Complex den = 1;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) den *= z[i] - z[j];
      const Complex step = p(z[i]) / den;
      z[i] -= step;
      move = std::max(move, std::abs(step));
    }
    if (move < 1e-15) break;
  }
  return z;
}

}  // namespace

TEST_CASE("herm_eig matches characteristic polynomial roots") {
  std::mt19937_64 rng(42);
  const MatrixXc a = random_hermitian(rng, 5);
  const auto d = herm_eig(HermMatrix(a));

  auto roots = poly_roots(charpoly(a));
  std::vector<double> expect;
  for (auto z : roots) {
    CHECK(std::abs(z.imag()) < 1e-8);
    expect.push_back(z.real());
  }
  std::sort(expect.begin(), expect.end());
  for (std::size_t k = 0; k < 5; ++k) CHECK(d.eigenvalues(Eigen::Index(k)) == doctest::Approx(expect[k]).epsilon(1e-9));

  CHECK((d.reconstruct() - a).norm() < 1e-12 * (1 + a.norm()));
  CHECK((d.eigenvectors.adjoint() * d.eigenvectors - MatrixXc::Identity(5, 5)).norm() < 1e-12);
}

TEST_CASE("herm_eig on a known real spectrum") {
  Eigen::MatrixXd a(2, 2);
  a << 2, 1, 1, 2;
  const auto d = herm_eig(BasicHermMatrix<double>(a));
  CHECK(d.eigenvalues(0) == doctest::Approx(1));
  CHECK(d.eigenvalues(1) == doctest::Approx(3));
}

TEST_CASE("HermMatrix rejects non-Hermitian input and fixes the diagonal") {
  MatrixXc a(2, 2);
  a << 1, 2, 0, 1;
  CHECK_THROWS_AS(HermMatrix{a}, InputError);
  CHECK_THROWS_AS(HermMatrix{MatrixXc(2, 3)}, InputError);
  MatrixXc b(2, 2);
  b << Complex(1, 1e-14), Complex(0, 1), Complex(0, -1), 2;
  const HermMatrix h(b);
  CHECK(h(0, 0).imag() == 0.0);
}

TEST_CASE("sqrt_psd squares back") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 5; ++t) {
    const MatrixXc x = random_hermitian(rng, 4);
    const MatrixXc a = x * x.adjoint();
    const MatrixXc s = sqrt_psd(HermMatrix(a)).matrix();
    CHECK((s * s - a).norm() < 1e-10 * (1 + a.norm()));
    CHECK((s - s.adjoint()).norm() == 0.0);
    CHECK(herm_eig(HermMatrix(s)).eigenvalues.minCoeff() > -1e-10);
  }
}

TEST_CASE("check_psd clamps round-off and rejects indefinite matrices") {
  Eigen::MatrixXd ok(2, 2);
  ok << 1, 1, 1, 1 + 1e-17;
  CHECK_NOTHROW(check_psd(herm_eig(BasicHermMatrix<double>(ok))));
  Eigen::MatrixXd bad(2, 2);
  bad << 1, 2, 2, 1;
  CHECK_THROWS_AS(check_psd(herm_eig(BasicHermMatrix<double>(bad))), NumericalError);
  CHECK_THROWS_AS(sqrt_psd(BasicHermMatrix<double>(bad)), NumericalError);
}

TEST_CASE("svd reconstructs and gives the norms") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  MatrixXc a(4, 3);
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) a(i, j) = Complex(g(rng), g(rng));
  const auto d = svd(a);
  CHECK((d.U * d.singular_values.asDiagonal() * d.V.adjoint() - a).norm() < 1e-12 * a.norm());

  // operator norm by power iteration on A*A
  VectorXc v = VectorXc::Ones(3);
  for (int k = 0; k < 500; ++k) v = (a.adjoint() * (a * v)).normalized();
  CHECK(operator_norm(a) == doctest::Approx((a * v).norm()).epsilon(1e-10));

  // nuclear norm of a PSD matrix is its trace
  const MatrixXc p = a.adjoint() * a;
  CHECK(nuclear_norm(p) == doctest::Approx(p.trace().real()).epsilon(1e-12));
  CHECK(operator_norm(MatrixXc(0, 0)) == 0.0);
}

TEST_CASE("spectral_apply builds functions of the matrix") {
  Eigen::MatrixXd a(2, 2);
  a << 2, 1, 1, 2;
  const auto d = herm_eig(BasicHermMatrix<double>(a));
  const Eigen::MatrixXd inv = spectral_apply(d, [](double x) { return 1 / x; });
  CHECK((inv * a - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-14);
}
