#include <doctest.h>

#include <cmath>

#include <Eigen/LU>

#include "hplab/sequences.hpp"

using namespace hplab;

namespace {

GeneratedSequence geometric(std::size_t n, double ratio = 0.5) {
  return generate({DiscGeometric{ratio}, n});
}

}  // namespace

TEST_CASE("generators") {
  const auto g = geometric(4);
  REQUIRE(g.points.size() == 4);
  CHECK(std::get<DiscPoint>(g.points[0]).z == Complex(0.5));
  CHECK(std::get<DiscPoint>(g.points[3]).z == Complex(1 - 1.0 / 16));
  const auto h = generate({DiscHarmonic{}, 3});
  CHECK(std::get<DiscPoint>(h.points[2]).z.real() == doctest::Approx(2.0 / 3));
  const auto c = generate({DiscCustom{{0.1, Complex(0, 0.2)}}, 2});
  CHECK(c.points.size() == 2);
  CHECK_THROWS_AS(generate({DiscCustom{{0.1}}, 5}), InputError);
  const auto r = example316_radii(Example316{}, 3);
  CHECK(r[0] == 0);
  CHECK(1 - r[2] * r[2] == doctest::Approx(1.0 / 16));
}

TEST_CASE("weak separation") {
  const auto g = geometric(6);
  // consecutive points 1 - 2^-n, 1 - 2^-(n+1) are at pseudohyperbolic distance 1/3
  CHECK(weak_separation(gram(g.model, g.points)) == doctest::Approx(1.0 / 3).epsilon(1e-2));
  const MatrixXc K = kernel_matrix(g.model, g.points);
  CHECK(weak_separation(K) == doctest::Approx(weak_separation(Gram(K))).epsilon(1e-12));
  const Gram two = gram(KernelModel(Szego{}), PointSet::disc({0.0, 0.6}));
  CHECK(weak_separation(two) == doctest::Approx(0.6));
}

TEST_CASE("Carleson constant") {
  const Gram one = gram(KernelModel(Szego{}), PointSet::disc({0.3}));
  CHECK(carleson_constant(one) == doctest::Approx(1.0));
  Eigen::VectorXd d(3);
  d << 1, 4, 9;
  CHECK(carleson_constant(Gram(MatrixXc(d.cast<Complex>().asDiagonal()))) == doctest::Approx(1.0));

  double prev = 0;
  for (std::size_t n : {4, 6, 8, 10, 12}) {
    const auto s = geometric(n);
    const double c = carleson_constant(gram(s.model, s.points));
    CHECK(c >= prev);
    prev = c;
  }
  const auto s10 = geometric(10);
  const auto s12 = geometric(12);
  CHECK(carleson_constant(gram(s10.model, s10.points)) == doctest::Approx(6.1522).epsilon(1e-4));
  CHECK(carleson_constant(gram(s12.model, s12.points)) == doctest::Approx(6.659).epsilon(1e-3));
}

TEST_CASE("dual basis against a direct LU solve") {
  const auto s = geometric(8);
  const Gram g = gram(s.model, s.points);
  const auto db = dual_basis(g);
  const MatrixXc C = g.K().fullPivLu().inverse();
  double worst = 0;
  for (Eigen::Index n = 0; n < 8; ++n) {
    // f_n = sum_m C(m,n) k_m, so ||f_n||^2 = C(n,n)
    const double expect = C(n, n).real() * g.diag(n);
    CHECK(db.scaled_norms[std::size_t(n)] == doctest::Approx(expect).epsilon(1e-8));
    CHECK((db.values.col(n) - VectorXc::Unit(8, n)).norm() < 1e-8);
    worst = std::max(worst, db.scaled_norms[std::size_t(n)]);
  }
  CHECK(worst == doctest::Approx(1709.758103685916).epsilon(1e-8));
}

TEST_CASE("interpolation verdicts") {
  const auto s = geometric(10);
  const auto ok = is_interpolating(s.model, s.points);
  CHECK(ok.verdict == Verdict::Interpolating);
  CHECK(to_string(ok.verdict) == "interpolating");

  const auto h = generate({DiscHarmonic{}, 30});
  const auto bad = is_interpolating(h.model, h.points);
  CHECK(bad.verdict == Verdict::NotSeparated);
  CHECK(bad.delta < kDefaultDeltaMin);

  const auto tight = is_interpolating(gram(s.model, s.points), 0.05, 2.0);
  CHECK(tight.verdict == Verdict::CarlesonUnbounded);
}

TEST_CASE("orthogonal-point family") {
  const auto r = example316_radii(Example316{}, 20);
  CHECK(example316_sup(r, 1) == doctest::Approx(1.0));
  for (std::size_t N : {2, 5, 10, 20}) {
    CHECK(example316_sup(r, N) == doctest::Approx(example316_closed_form(r, N)).epsilon(1e-12));
    // 1 + sum_{n<N} 4^-n minus the smallest term
    const double geo = (1 - std::pow(4.0, -double(N))) / 0.75;
    CHECK(example316_sup(r, N) == doctest::Approx(1 + geo - std::pow(4.0, 1 - double(N))).epsilon(1e-12));
  }
  CHECK(example316_sup(r, 20) < 1 + 4.0 / 3);

  const auto seq = generate({Example316{}, 5});
  const Gram g = gram(seq.model, seq.points);
  CHECK(weak_separation(g) == doctest::Approx(std::sqrt(0.75)));  // r_1, from the origin
}

TEST_CASE("growth-rule ratios against a direct sum") {
  auto direct = [](GrowthRule rule, int j) {
    // long double sum over the representable points
    long double sum = 0;
    const long double yj = std::exp((long double)log_growth(rule, j));
    for (int n = first_index(rule); n < 40; ++n) {
      const long double ly = log_growth(rule, n);
      if (ly > 11000) break;
      const long double y = std::exp(ly);
      const long double xn = 1 - 1 / y, xj = 1 - 1 / yj;
      sum += (1 - xn * xn) / (1 - xn * xj);
    }
    return double(sum / std::log(yj * yj / (2 * yj - 1)));
  };
  for (int j = 1; j <= 4; ++j) {
    const auto r = example317_ratio(GrowthRule::DoubleExp, j);
    CHECK(r.ratio == doctest::Approx(direct(GrowthRule::DoubleExp, j)).epsilon(1e-9));
  }
  for (int j = 2; j <= 6; ++j) {
    const auto r = example317_ratio(GrowthRule::FactorialSq, j);
    CHECK(r.ratio == doctest::Approx(direct(GrowthRule::FactorialSq, j)).epsilon(1e-9));
  }
}

TEST_CASE("double-exponential ratios decay") {
  const double expect[] = {2.9502, 1.7014, 1.1471, 0.7382, 0.4507, 0.2676, 0.1554, 0.0887, 0.0499};
  double prev = INFINITY;
  for (int j = 1; j <= 9; ++j) {
    const auto r = example317_ratio(GrowthRule::DoubleExp, j);
    CHECK(r.ratio == doctest::Approx(expect[j - 1]).epsilon(2e-4));
    CHECK(r.ratio < prev);
    CHECK(r.tail_bound <= 1e-15 * r.sum);
    prev = r.ratio;
  }
  CHECK(example317_ratio(GrowthRule::DoubleExp, 30).ratio < 1e-6);
  CHECK_THROWS_AS(example317_ratio(GrowthRule::DoubleExp, 0), InputError);
  CHECK_THROWS_AS(example317_ratio(GrowthRule::FactorialSq, 1), InputError);
}

TEST_CASE("growth-rule logs") {
  CHECK(log_growth(GrowthRule::DoubleExp, 0) == 0);
  CHECK(log_growth(GrowthRule::DoubleExp, 3) == doctest::Approx(8 * std::log(2.0)));
  CHECK(log_growth(GrowthRule::FactorialSq, 4) == doctest::Approx(2 * std::log(24.0)));
  CHECK(first_index(GrowthRule::FactorialSq) == 1);
}
