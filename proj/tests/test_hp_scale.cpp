#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hplab/hp_scale.hpp"

using namespace hplab;

namespace {

// 2F1(a, a; 1; x) by direct summation
double hyp2f1_aa1(double a, double x) {
  double term = 1, sum = 1;
  for (int n = 0; n < 200000; ++n) {
    term *= (a + n) * (a + n) / ((n + 1.0) * (n + 1.0)) * x;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

}  // namespace

TEST_CASE("Hardy integral closed forms") {
  for (double r : {0.0, 0.3, 0.9, 0.99, 0.999}) {
    const double r2 = r * r;
    CHECK(hardy_integral(r, 0).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hardy_integral(r, 2).value == doctest::Approx(1 / (1 - r2)).epsilon(1e-9));
    CHECK(hardy_integral(r, 4).value == doctest::Approx((1 + r2) / std::pow(1 - r2, 3)).epsilon(1e-9));
    CHECK(hardy_integral(r, 1).value ==
          doctest::Approx(2 / std::numbers::pi * std::comp_ellint_1(r)).epsilon(1e-9));
  }
}

TEST_CASE("Hardy integral matches the hypergeometric series") {
  for (double e : {0.7, 1.5, 3.3}) {
    for (double r : {0.2, 0.8, 0.95}) {
      const auto q = hardy_integral(r, e);
      CHECK(q.converged);
      CHECK(q.value == doctest::Approx(hyp2f1_aa1(e / 2, r * r)).epsilon(1e-9));
    }
  }
  const auto deep = hardy_integral(1 - 1e-6, 1);
  CHECK(deep.converged);
  CHECK(deep.value == doctest::Approx(2 / std::numbers::pi * std::comp_ellint_1(1 - 1e-6)).epsilon(1e-8));
}

TEST_CASE("exponent and radial profile") {
  const auto p1 = PExponent::from_p(1);
  CHECK(p1.q_infinite);
  CHECK(p1.theta == 0);
  const auto p3 = PExponent::from_p(3);
  CHECK(p3.q == doctest::Approx(1.5));
  CHECK(p3.theta == doctest::Approx(2.0 / 3));
  CHECK_THROWS_AS(PExponent::from_p(0.5), InputError);
  CHECK_THROWS_AS(PExponent::from_p(INFINITY), InputError);

  const auto rp = RadialProfile::from_r(0.6);
  CHECK(rp.kxx == doctest::Approx(1 / 0.64));
  CHECK(RadialProfile::from_kxx(rp.kxx).r == doctest::Approx(0.6));
  CHECK_THROWS_AS(RadialProfile::from_r(1.0), InputError);
  CHECK_THROWS_AS(RadialProfile::from_kxx(0.5), InputError);
}

TEST_CASE("kernel norm bounds") {
  const KernelModel sz(Szego{});
  for (double r : {0.0, 0.5, 0.99}) {
    const Point x = DiscPoint{Complex(0, r)};
    const double k = 1 / (1 - r * r);
    CHECK(kernel_hq_upper(sz, x, PExponent::from_p(2)) == doctest::Approx(std::sqrt(k)).epsilon(1e-9));
    // ||s^{2/p}||_{H^p}^p = ||s||_{H^2}^2 = k
    CHECK(kernel_power_hq_upper(sz, x, PExponent::from_p(4)) == doctest::Approx(std::pow(k, 0.25)).epsilon(1e-9));
  }
  MatrixXc K(1, 1);
  K << 0.5;
  CHECK_THROWS_AS(kernel_hq_upper(KernelModel(ExplicitGram{K}), AbstractIndex{0}, PExponent::from_p(2)),
                  InputError);
}

TEST_CASE("dual bounds") {
  const KernelModel sz(Szego{});
  const Gram g = gram(sz, PointSet::disc({0.0, Complex(0.6, 0.6)}));
  const double k = g.diag(1);
  const auto b1 = delta_dual_bounds(g, 1, PExponent::from_p(1));
  CHECK(b1.lower == k);
  CHECK(b1.upper == k);
  const auto b2 = delta_dual_bounds(g, 1, PExponent::from_p(2));
  CHECK(b2.lower == doctest::Approx(std::sqrt(k)));
  CHECK(b2.upper == doctest::Approx(std::sqrt(k)));
  for (double p : {1.2, 1.5, 3.0, 6.0}) {
    const auto b = delta_dual_bounds(g, 1, PExponent::from_p(p));
    CHECK(b.lower <= b.upper * (1 + 1e-9));
    CHECK(b.lower > 0);
  }
}

TEST_CASE("kernel norm upper bound is nondecreasing in the exponent") {
  const Gram g = gram(KernelModel(Szego{}), PointSet::disc({0.0, 0.9}));
  double prev = 0;
  for (double s : {1.0, 1.3, 1.7, 2.0, 3.0, 8.0, double(INFINITY)}) {
    const double v = kernel_norm_upper(g, 1, s);
    CHECK(v >= prev * (1 - 1e-9));
    prev = v;
  }
  CHECK(prev == doctest::Approx(g.diag(1)));
}

TEST_CASE("report rows agree between Szego and DA on matching diagonals") {
  const std::vector<PExponent> ps = {PExponent::from_p(1), PExponent::from_p(2), PExponent::from_p(4)};
  VectorXc v(2);
  v << 0.5, Complex(0, 0.5);
  const double r = v.norm();
  const auto sz = thmc1_report(KernelModel(Szego{}), {DiscPoint{Complex(r, 0)}}, ps);
  const auto da = thmc1_report(KernelModel(DruryArveson{2}), {BallPoint{v}}, ps);
  REQUIRE(sz.size() == 3);
  REQUIRE(da.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(sz[i].kxx == doctest::Approx(da[i].kxx));
    CHECK(sz[i].ratio_a == doctest::Approx(da[i].ratio_a).epsilon(1e-6));
    CHECK(sz[i].ratio_c == doctest::Approx(da[i].ratio_c).epsilon(1e-10));
    CHECK(sz[i].ratio_d == doctest::Approx(da[i].ratio_d).epsilon(1e-8));
  }
  CHECK(sz[0].kernel == "szego");
  CHECK(da[0].kernel == "da2");
}
