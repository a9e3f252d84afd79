#pragma once

// Pointwise estimates on the H^p scale: Hardy-space quadrature on the circle,
// kernel-function norm bounds and two-sided bounds for ||delta_x||.

#include <cstddef>
#include <string>
#include <vector>

#include "hplab/weak_product.hpp"

namespace hplab {

/// Exponent p in [1, inf) with its conjugate q and theta = (p - 1) / p.
struct PExponent {
  double p = 1;
  double q = 0;  // meaningless when q_infinite
  bool q_infinite = true;
  double theta = 0;

  static PExponent from_p(double p);
};

/// r in [0, 1) and k(x,x) = 1 / (1 - r^2).
struct RadialProfile {
  double r = 0;
  double kxx = 1;

  static RadialProfile from_r(double r);
  static RadialProfile from_kxx(double kxx);
};

struct QuadratureResult {
  double value = 0;
  std::size_t nodes = 0;
  bool converged = true;
};

/// (1/2pi) int_0^{2pi} |1 - r e^{it}|^{-exponent} dt.
///
/// Trapezoid rule after the periodic substitution t = 2 atan(g tan(s/2)),
/// g = sqrt((1-r)/(1+r)), which spreads the peak at t = 0 over a window of
/// width ~ sqrt(1-r). Nodes start at 4096 and double until the relative
/// change is below 1e-8; more than 2^24 nodes flags the result.
QuadratureResult hardy_integral(double r, double exponent);

/// ||s_r^alpha||_{H^p} = ((1/2pi) int |1 - r e^{it}|^{-alpha p} dt)^{1/p}.
QuadratureResult hardy_norm_power(double r, const PExponent& p, double alpha);

/// Upper bound for ||k_x||_{H^p(k)}: the Hardy norm ||s_r||_{H^p} with
/// r = sqrt(1 - 1/k(x,x)). Exact up to the H^p(s) ~ H^p equivalence constant.
double kernel_hq_upper(const KernelModel& model, const Point& x, const PExponent& p);

/// Same bound for the kernel power ||k_x^{2/p}||_{H^p(k)} (~ k(x,x)^{1/p}).
double kernel_power_hq_upper(const KernelModel& model, const Point& x, const PExponent& p);

struct DualBounds {
  double lower = 0;
  double upper = 0;
};

/// Bounds on ||delta_x||_{(H^p)^*} = ||k_x||_{H^q} on the restriction held by g.
///
///   p = 1:      both equal k(x,x)
///   1 < p <= 2: upper k^{1/p}; lower k / ||k_x||_{H^p} with ||k_x||_{H^p}
///               bounded by log-convexity between H^1 (solver) and H^2
///   p >= 2:     lower k^{1/p}; upper is the log-convexity bound for ||k_x||_{H^q}
DualBounds delta_dual_bounds(const Gram& g, Eigen::Index i, const PExponent& p);

/// Upper bound for ||k_x||_{H^s} on the restriction, 1 <= s <= inf (s = inf: Han).
double kernel_norm_upper(const Gram& g, Eigen::Index i, double s);

struct Thmc1Row {
  std::string kernel;
  std::string point;
  double p = 1;
  double kxx = 1;
  double lower = 0;
  double upper = 0;
  double ratio_a = 0;  // upper / k^{1/p}
  double ratio_c = 0;  // ||s_r||_{H^1} / (1 + log k), r from k(x,x)
  double ratio_d = 0;  // same with r = ||b(x)|| from the Pick embedding
};

/// One row per (x, p). Bounds are computed on the restriction to {x0, x}
/// where x0 is the kernel's base point (or {x} when x is the base point).
std::vector<Thmc1Row> thmc1_report(const KernelModel& model, const std::vector<Point>& xs,
                                   const std::vector<PExponent>& ps);

}  // namespace hplab
