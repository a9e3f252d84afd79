#include <doctest.h>

#include <random>

#include "hplab/weak_product.hpp"
#include "test_util.hpp"

using namespace hplab;

TEST_CASE("singleton and zero") {
  const Gram g = gram(KernelModel(Szego{}), PointSet::disc({0.5}));
  const H1Problem p(g, g.column(0));
  CHECK(h1_norm(p).value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(h1_norm_bruteforce(p, 1) == doctest::Approx(1.0).epsilon(1e-6));

  const H1Problem z(g, VectorXc::Zero(1));
  CHECK(h1_norm(z).value == 0.0);
  CHECK(h1_norm_bruteforce(z, 1) == 0.0);
}

TEST_CASE("orthogonal points give the diagonal formula exactly") {
  Eigen::VectorXd d(3);
  d << 2, 3, 5;
  const Gram g(MatrixXc(d.cast<Complex>().asDiagonal()));
  VectorXc h(3);
  h << Complex(1, 1), -2, Complex(0, 0.5);
  const double expect = std::sqrt(2.0) / 2 + 2.0 / 3 + 0.5 / 5;
  CHECK(h1_diag_formula(g, h) == doctest::Approx(expect).epsilon(1e-15));
  CHECK(h1_norm(H1Problem(g, h)).value == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("solver agrees with the brute-force oracle") {
  std::mt19937_64 rng(20);
  for (int t = 0; t < 12; ++t) {
    const std::size_t n = 2 + std::size_t(t % 2);
    const auto in = test::random_instance(rng, t % 4 < 2 ? 0 : 2, n);
    const H1Problem p(in.gram, test::random_values(rng, Eigen::Index(n)));
    const auto est = h1_norm(p);
    CHECK(est.converged);
    CHECK(est.lower <= est.upper);
    const double bf = h1_norm_bruteforce(p, int(n), 50, 100 + std::uint64_t(t));
    CHECK(std::abs(est.value - bf) <= 1e-4 * (1 + est.value));
    CHECK(est.lower <= bf * (1 + 1e-12));
  }
}

TEST_CASE("certificate factors h at the computed cost") {
  std::mt19937_64 rng(21);
  const auto in = test::random_instance(rng, 2, 4);
  const H1Problem p(in.gram, test::random_values(rng, 4));
  const auto est = h1_norm(p);
  const auto cert = h1_certificate(p);
  VectorXc sum = VectorXc::Zero(4);
  for (const auto& [f, g] : cert.pairs) sum += f.cwiseProduct(g);
  CHECK((sum - p.h).norm() < 1e-8 * p.h.norm());
  CHECK(cert.cost == doctest::Approx(est.value).epsilon(1e-5));
}

TEST_CASE("products are bounded by the product of norms") {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 20; ++t) {
    const auto in = test::random_instance(rng, t % 2 ? 2 : 0, 3 + std::size_t(t % 3));
    const auto n = in.gram.size();
    const VectorXc f = test::random_values(rng, n);
    const VectorXc g = test::random_values(rng, n);
    const double v = h1_norm(H1Problem(in.gram, f.cwiseProduct(g))).value;
    CHECK(v <= in.gram.norm(f) * in.gram.norm(g) + 1e-6);
  }
}

TEST_CASE("norm is homogeneous and subadditive") {
  std::mt19937_64 rng(23);
  const auto in = test::random_instance(rng, 0, 4);
  const VectorXc a = test::random_values(rng, 4);
  const VectorXc b = test::random_values(rng, 4);
  H1SolverOptions tight;
  tight.tolerance = 1e-9;
  const double na = h1_norm(H1Problem(in.gram, a), tight).value;
  const double nb = h1_norm(H1Problem(in.gram, b), tight).value;
  const double nab = h1_norm(H1Problem(in.gram, a + b), tight).value;
  const double n3 = h1_norm(H1Problem(in.gram, Complex(0, -3) * a), tight).value;
  CHECK(nab <= na + nb + 1e-6);
  CHECK(n3 == doctest::Approx(3 * na).epsilon(1e-7));
}

TEST_CASE("restriction to a subset does not increase the norm") {
  std::mt19937_64 rng(24);
  H1SolverOptions tight;
  tight.tolerance = 1e-9;
  for (int t = 0; t < 10; ++t) {
    const auto in = test::random_instance(rng, t % 2 ? 2 : 0, 5);
    const VectorXc h = test::random_values(rng, 5);
    const std::vector<std::size_t> idx = {0, 2, 3};
    VectorXc hs(3);
    for (std::size_t k = 0; k < 3; ++k) hs(Eigen::Index(k)) = h(Eigen::Index(idx[k]));
    const double full = h1_norm(H1Problem(in.gram, h), tight).value;
    const double sub = h1_norm(H1Problem(gram(in.model, in.points.subset(idx)), hs), tight).value;
    CHECK(sub <= full + 1e-6);
  }
}

TEST_CASE("a disc slice of the ball gives the Szego norm") {
  std::mt19937_64 rng(25);
  VectorXc zeta(2);
  zeta << Complex(0.6, 0.0), Complex(0.0, 0.8);
  std::vector<Complex> zs = {Complex(0.1, 0.2), Complex(-0.5, 0.3), Complex(0.7, -0.1), Complex(0, -0.6)};
  std::vector<VectorXc> vs;
  for (auto z : zs) vs.push_back(z * zeta);
  const Gram gd = gram(KernelModel(Szego{}), PointSet::disc(zs));
  const Gram gb = gram(KernelModel(DruryArveson{2}), PointSet::ball(vs));
  CHECK((gd.K() - gb.K()).norm() < 1e-14);
  const VectorXc h = test::random_values(rng, 4);
  CHECK(h1_norm(H1Problem(gb, h)).value == doctest::Approx(h1_norm(H1Problem(gd, h)).value).epsilon(1e-8));
}

TEST_CASE("constraint map and its adjoint") {
  std::mt19937_64 rng(26);
  const auto in = test::random_instance(rng, 2, 3);
  const MatrixXc& R = in.gram.sqrt();
  MatrixXc N(3, 3);
  for (Eigen::Index k = 0; k < 9; ++k) N.data()[k] = test::random_values(rng, 1)(0);
  const VectorXc y = test::random_values(rng, 3);
  // <A N, y> = <N, A* y> in the real Frobenius pairing
  const Complex lhs = y.dot(product_diagonal(R, N));
  const Complex rhs = (product_diagonal_adjoint(R, y).adjoint() * N).trace();
  CHECK(std::abs(lhs - rhs) < 1e-12);
  CHECK((product_diagonal(R, N) - (R * N * R.transpose()).diagonal()).norm() < 1e-14);
}

TEST_CASE("input validation") {
  const Gram g = gram(KernelModel(Szego{}), PointSet::disc({0.0, 0.5}));
  CHECK_THROWS_AS(H1Problem(g, VectorXc::Ones(3)), InputError);
  const Gram g5 = gram(KernelModel(Szego{}), PointSet::disc({0.0, 0.1, 0.2, 0.3, 0.4}));
  CHECK_THROWS_AS(h1_norm_bruteforce(H1Problem(g5, VectorXc::Ones(5)), 2), InputError);
}
