#include "hplab/hp_scale.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace hplab {

PExponent PExponent::from_p(double p) {
  if (!std::isfinite(p) || p < 1) throw InputError("exponent p must be finite and >= 1");
  PExponent e;
  e.p = p;
  e.theta = (p - 1) / p;
  if (p == 1) {
    e.q = std::numeric_limits<double>::infinity();
    e.q_infinite = true;
  } else {
    e.q = p / (p - 1);
    e.q_infinite = false;
  }
  return e;
}

RadialProfile RadialProfile::from_r(double r) {
  if (!(r >= 0 && r < 1)) throw InputError("radius must lie in [0, 1)");
  return {r, 1 / ((1 - r) * (1 + r))};
}

RadialProfile RadialProfile::from_kxx(double kxx) {
  if (!(kxx >= 1)) throw InputError("k(x,x) must be >= 1 for a normalized kernel");
  return {std::sqrt(1 - 1 / kxx), kxx};
}

QuadratureResult hardy_integral(double r, double exponent) {
  if (!(r >= 0 && r < 1)) throw InputError("radius must lie in [0, 1)");
  if (!std::isfinite(exponent)) throw InputError("exponent must be finite");
  constexpr std::size_t kStart = 4096;
  constexpr std::size_t kCap = std::size_t(1) << 24;

  const double lambda = exponent / 2;
  const double a = (1 - r) * (1 - r);
  const double g = std::sqrt((1 - r) / (1 + r));
  const double b = (1 + r) * (1 + r) * g * g;
  // |1 - r e^{it}|^{-2 lambda} dt/ds in the substituted variable s.
  auto integrand = [&](double s) {
    const double sn = std::sin(s / 2);
    const double cs = std::cos(s / 2);
    const double c2 = cs * cs;
    const double s2 = sn * sn;
    return g * std::pow(c2 + g * g * s2, lambda - 1) * std::pow(a * c2 + b * s2, -lambda);
  };

  std::size_t m = kStart;
  double sum = 0;
  for (std::size_t k = 0; k < m; ++k) sum += integrand(2 * std::numbers::pi * double(k) / double(m));
  double value = sum / double(m);
  while (m < kCap) {
    double odd = 0;
    for (std::size_t k = 0; k < m; ++k) {
      odd += integrand(std::numbers::pi * double(2 * k + 1) / double(m));
    }
    sum += odd;
    m *= 2;
    const double next = sum / double(m);
    const bool done = std::abs(next - value) <= 1e-8 * std::abs(next);
    value = next;
    if (done) return {value, m, true};
  }
  return {value, m, false};
}

QuadratureResult hardy_norm_power(double r, const PExponent& p, double alpha) {
  auto q = hardy_integral(r, alpha * p.p);
  q.value = std::pow(q.value, 1 / p.p);
  return q;
}

namespace {

double normalized_diagonal(const KernelModel& model, const Point& x) {
  const double kxx = eval_kernel(model, x, x).real();
  if (!(kxx >= 1 - 1e-12)) {
    throw InputError("k(x,x) < 1: the kernel is not normalized");
  }
  return std::max(kxx, 1.0);
}

double checked(const QuadratureResult& q) {
  if (!q.converged) {
    throw NumericalError("Hardy quadrature hit the node cap", double(q.nodes));
  }
  return q.value;
}

/// Upper bound for ||k_x||_{H^s} given k = k(x,x) and an upper bound h1 for ||k_x||_{H^1}.
double norm_upper_from(double k, double h1, double s) {
  if (std::isinf(s)) return k;
  if (s == 1) return h1;
  if (s <= 2) {
    // H^s = [H^1, H^2]_t with t = 2 (s - 1) / s
    const double t = 2 * (s - 1) / s;
    return std::pow(h1, 1 - t) * std::pow(k, t / 2);
  }
  // H^s = [H^2, Han]_t with t = 1 - 2/s: k^{(1-t)/2} k^t = k^{1 - 1/s}
  return std::pow(k, 1 - 1 / s);
}

double kernel_h1_upper(const Gram& g, Eigen::Index i) {
  const auto est = h1_norm(H1Problem(g, g.column(i)));
  if (!est.converged) throw NumericalError("H1 solver did not converge for k_x", est.gap);
  return est.upper;
}

DualBounds bounds_from(double k, double h1, const PExponent& p) {
  if (p.p == 1) return {k, k};
  return {k / norm_upper_from(k, h1, p.p), norm_upper_from(k, h1, p.q)};
}

bool needs_h1(const PExponent& p) { return p.p != 1 && p.p != 2; }

}  // namespace

double kernel_hq_upper(const KernelModel& model, const Point& x, const PExponent& p) {
  const auto prof = RadialProfile::from_kxx(normalized_diagonal(model, x));
  return checked(hardy_norm_power(prof.r, p, 1.0));
}

double kernel_power_hq_upper(const KernelModel& model, const Point& x, const PExponent& p) {
  const auto prof = RadialProfile::from_kxx(normalized_diagonal(model, x));
  return checked(hardy_norm_power(prof.r, p, 2.0 / p.p));
}

double kernel_norm_upper(const Gram& g, Eigen::Index i, double s) {
  if (i < 0 || i >= g.size()) throw InputError("point index out of range");
  if (!(s >= 1)) throw InputError("exponent must be >= 1");
  const double k = g.diag(i);
  const bool interior = s > 1 && s < 2;
  return norm_upper_from(k, (s == 1 || interior) ? kernel_h1_upper(g, i) : 0.0, s);
}

DualBounds delta_dual_bounds(const Gram& g, Eigen::Index i, const PExponent& p) {
  if (i < 0 || i >= g.size()) throw InputError("point index out of range");
  const double k = g.diag(i);
  return bounds_from(k, needs_h1(p) ? kernel_h1_upper(g, i) : 0.0, p);
}

std::vector<Thmc1Row> thmc1_report(const KernelModel& model, const std::vector<Point>& xs,
                                   const std::vector<PExponent>& ps) {
  std::vector<Thmc1Row> rows;
  const auto one = PExponent::from_p(1);
  for (const auto& x : xs) {
    std::vector<Point> v;
    if (model.basepoint() && to_string(*model.basepoint()) != to_string(x)) {
      v.push_back(*model.basepoint());
    }
    v.push_back(x);
    const Gram g = gram(model, PointSet(v));
    const Eigen::Index i = g.size() - 1;
    const double k = normalized_diagonal(model, x);

    bool any_interior = false;
    for (const auto& p : ps) any_interior = any_interior || needs_h1(p);
    const double h1 = any_interior ? kernel_h1_upper(g, i) : 0.0;

    const double log_term = 1 + std::log(k);
    const double ratio_c =
        checked(hardy_norm_power(RadialProfile::from_kxx(k).r, one, 1.0)) / log_term;
    const auto b = pick_embedding(g);
    const double r_embed = std::min(b[std::size_t(i)].norm(), std::nextafter(1.0, 0.0));
    const double ratio_d = checked(hardy_norm_power(r_embed, one, 1.0)) / log_term;

    for (const auto& p : ps) {
      const auto bd = bounds_from(k, h1, p);
      rows.push_back({model.name(), to_string(x), p.p, k, bd.lower, bd.upper,
                      bd.upper / std::pow(k, 1 / p.p), ratio_c, ratio_d});
    }
  }
  return rows;
}

}  // namespace hplab
