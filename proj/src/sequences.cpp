#include "hplab/sequences.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace hplab {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Interpolating: return "interpolating";
    case Verdict::NotSeparated: return "not_separated";
    case Verdict::CarlesonUnbounded: return "carleson_unbounded";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::vector<double> example316_radii(const Example316& ex, std::size_t n) {
  if (!ex.radii.empty()) {
    if (ex.radii.size() < n) throw InputError("not enough radii for the requested truncation");
    return {ex.radii.begin(), ex.radii.begin() + std::ptrdiff_t(n)};
  }
  if (!(ex.decay > 1)) throw InputError("orthogonal-point decay must exceed 1");
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = std::sqrt(1 - std::pow(ex.decay, -double(i)));
  return r;
}

int first_index(GrowthRule rule) { return rule == GrowthRule::FactorialSq ? 1 : 0; }

double log_growth(GrowthRule rule, int n) {
  if (n < first_index(rule)) throw InputError("sequence index below the first index");
  switch (rule) {
    case GrowthRule::DoubleExp: return n == 0 ? 0.0 : std::ldexp(1.0, n) * std::numbers::ln2;
    case GrowthRule::FactorialSq: return 2 * std::lgamma(double(n) + 1);
  }
  return 0;
}

GeneratedSequence generate(const SequenceSpec& spec) {
  const std::size_t n = spec.truncation;
  if (n == 0) throw InputError("sequence truncation must be positive");
  return std::visit(
      overloaded{
          [&](const DiscGeometric& g) -> GeneratedSequence {
            if (!(g.ratio > 0 && g.ratio < 1)) throw InputError("geometric ratio must lie in (0,1)");
            std::vector<Complex> zs;
            for (std::size_t k = 1; k <= n; ++k) zs.emplace_back(1 - std::pow(g.ratio, double(k)));
            return {KernelModel(Szego{}), PointSet::disc(zs)};
          },
          [&](const DiscHarmonic&) -> GeneratedSequence {
            std::vector<Complex> zs;
            for (std::size_t k = 1; k <= n; ++k) zs.emplace_back(1 - 1 / double(k));
            return {KernelModel(Szego{}), PointSet::disc(zs)};
          },
          [&](const DiscCustom& c) -> GeneratedSequence {
            if (c.points.size() < n) throw InputError("not enough custom points for the truncation");
            return {KernelModel(Szego{}),
                    PointSet::disc({c.points.begin(), c.points.begin() + std::ptrdiff_t(n)})};
          },
          [&](const Example316& ex) -> GeneratedSequence {
            const auto r = example316_radii(ex, n);
            std::vector<VectorXc> b(n, VectorXc::Zero(Eigen::Index(n)));
            for (std::size_t i = 0; i < n; ++i) b[i](Eigen::Index(i)) = r[i];
            return {KernelModel(NormalizedEmbedding{b}), PointSet::abstract(n)};
          },
          [&](const Example317& ex) -> GeneratedSequence {
            std::vector<Complex> zs;
            for (std::size_t k = 0; k < n; ++k) {
              zs.emplace_back(-std::expm1(-log_growth(ex.rule, first_index(ex.rule) + int(k))));
            }
            return {KernelModel(Szego{}), PointSet::disc(zs)};
          },
      },
      spec.generator);
}

double weak_separation(const MatrixXc& K) {
  if (K.rows() < 2) throw InputError("weak separation needs at least two points");
  double best = 1;
  for (Eigen::Index m = 0; m < K.rows(); ++m) {
    for (Eigen::Index n = m + 1; n < K.rows(); ++n) best = std::min(best, dk(K, m, n));
  }
  return best;
}

double weak_separation(const Gram& g) { return weak_separation(g.K()); }

double carleson_constant(const Gram& g) {
  Eigen::VectorXd w(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) w(i) = 1 / g.diag(i);
  const MatrixXc T = g.sqrt() * w.asDiagonal() * g.sqrt();
  return herm_eig(HermMatrix(T, 1e-10)).eigenvalues.maxCoeff();
}

DualBasis dual_basis(const Gram& g) {
  DualBasis out;
  out.coefficients = g.inverse();
  out.values = g.K() * out.coefficients;
  const Eigen::Index n = g.size();
  const double err = (out.values - MatrixXc::Identity(n, n)).cwiseAbs().maxCoeff();
  if (err > 1e-10) {
    throw NumericalError("dual basis does not interpolate delta_nk to 1e-10 (Gram too ill-conditioned)",
                         err);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    out.scaled_norms.push_back(g.inverse()(i, i).real() * g.diag(i));
  }
  return out;
}

namespace {

Verdict decide(double delta, double carleson, double delta_min, double c_max) {
  if (delta < delta_min) return Verdict::NotSeparated;
  if (std::isnan(carleson)) return Verdict::Inconclusive;
  if (carleson > c_max) return Verdict::CarlesonUnbounded;
  return Verdict::Interpolating;
}

void check_thresholds(double delta_min, double c_max) {
  if (!(delta_min > 0) || !(c_max > 0)) throw InputError("thresholds must be positive");
}

}  // namespace

InterpCertificate is_interpolating(const Gram& g, double delta_min, double c_max) {
  check_thresholds(delta_min, c_max);
  InterpCertificate cert;
  cert.delta = g.size() >= 2 ? weak_separation(g) : 1.0;
  cert.carleson = carleson_constant(g);
  try {
    cert.dual_norms = dual_basis(g).scaled_norms;
  } catch (const NumericalError& e) {
    cert.note = e.what();
  }
  cert.verdict = decide(cert.delta, cert.carleson, delta_min, c_max);
  return cert;
}

InterpCertificate is_interpolating(const KernelModel& model, const PointSet& pts, double delta_min,
                                   double c_max) {
  check_thresholds(delta_min, c_max);
  const MatrixXc K = kernel_matrix(model, pts);
  try {
    return is_interpolating(Gram(K), delta_min, c_max);
  } catch (const NumericalError& e) {
    InterpCertificate cert;
    cert.delta = K.rows() >= 2 ? weak_separation(K) : 1.0;
    cert.carleson = kNaN;
    cert.note = e.what();
    cert.verdict = decide(cert.delta, cert.carleson, delta_min, c_max);
    return cert;
  }
}

double example316_sup(const std::vector<double>& radii, std::size_t N) {
  if (N == 0 || radii.size() < N) throw InputError("need N >= 1 radii");
  const auto n = Eigen::Index(N);
  MatrixXc K = MatrixXc::Ones(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = radii[std::size_t(i)];
    if (!(r >= 0 && r < 1)) throw InputError("radii must lie in [0,1)");
    K(i, i) = 1 / (1 - r * r);
  }
  double best = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    double s = 0;
    for (Eigen::Index i = 0; i < n; ++i) s += std::abs(K(i, j)) / K(i, i).real();
    best = std::max(best, s);
  }
  return best;
}

double example316_closed_form(const std::vector<double>& radii, std::size_t N) {
  if (N == 0 || radii.size() < N) throw InputError("need N >= 1 radii");
  double total = 0;
  double smallest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < N; ++i) {
    const double t = 1 - radii[i] * radii[i];
    total += t;
    smallest = std::min(smallest, t);
  }
  return 1 + total - smallest;
}

Example317Ratio example317_ratio(GrowthRule rule, int j) {
  if (j < first_index(rule)) throw InputError("index j below the first sequence index");
  Example317Ratio out;
  out.j = j;
  out.log_y = log_growth(rule, j);
  if (out.log_y <= 0) throw InputError("j is the base point (k(x_j,x_j) = 1, log k = 0)");
  const double b = std::exp(-out.log_y);  // 1 - x_j
  out.log_k = out.log_y - std::log(2 - b);

  // (1 - x_n^2) / (1 - x_n x_j) = a (2 - a) / (a + b - a b) with a = 1 - x_n.
  auto term = [&](double log_yn) {
    const double a = std::exp(-log_yn);
    if (log_yn <= out.log_y) {
      const double t = std::exp(log_yn - out.log_y);  // b / a
      return (2 - a) / (1 + t * (1 - a));
    }
    const double u = std::exp(out.log_y - log_yn);  // a / b
    return (2 - a) * u / (u + 1 - a);
  };

  double sum = 0;
  int n = first_index(rule);
  for (;; ++n) {
    sum += term(log_growth(rule, n));
    ++out.terms;
    if (n <= j) continue;
    // For m > n > j: term_m <= 2 y_j / y_m and y_{m+1} >= 4 y_m, so the rest is
    // at most (8/3) y_j / y_{n+1}.
    const double tail = (8.0 / 3.0) * std::exp(out.log_y - log_growth(rule, n + 1));
    if (tail <= 1e-17 * sum) {
      out.tail_bound = tail;
      break;
    }
  }
  out.sum = sum;
  out.ratio = sum / out.log_k;
  return out;
}

}  // namespace hplab
