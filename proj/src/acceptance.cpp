#include "hplab/acceptance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>

#include "hplab/hankel.hpp"
#include "hplab/hp_scale.hpp"
#include "hplab/sequences.hpp"

namespace hplab {

namespace {

using Rng = std::mt19937_64;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double uniform(Rng& rng) { return std::uniform_real_distribution<double>(0, 1)(rng); }

Complex gaussian(Rng& rng) {
  std::normal_distribution<double> n;
  const double re = n(rng);
  return {re, n(rng)};
}

VectorXc random_values(Rng& rng, Eigen::Index n) {
  VectorXc v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = gaussian(rng);
  return v;
}

/// Uniform in the ball of radius rmax in C^d.
VectorXc random_ball_point(Rng& rng, int d, double rmax) {
  VectorXc v = random_values(rng, d);
  const double radius = rmax * std::pow(uniform(rng), 1.0 / (2 * d));
  return v * (radius / v.norm());
}

struct Instance {
  KernelModel model;
  PointSet points;
  Gram gram;
};

/// d = 0 means the Szego kernel on the disc.
Instance random_instance(Rng& rng, int d, std::size_t n, double rmax = 0.9) {
  for (;;) {
    try {
      if (d == 0) {
        std::vector<Complex> zs;
        for (std::size_t i = 0; i < n; ++i) zs.push_back(random_ball_point(rng, 1, rmax)(0));
        auto pts = PointSet::disc(zs);
        KernelModel m(Szego{});
        Gram g = gram(m, pts);
        return {m, pts, g};
      }
      std::vector<VectorXc> vs;
      for (std::size_t i = 0; i < n; ++i) vs.push_back(random_ball_point(rng, d, rmax));
      auto pts = PointSet::ball(vs);
      KernelModel m(DruryArveson{d});
      Gram g = gram(m, pts);
      return {m, pts, g};
    } catch (const NumericalError&) {
      // points too close; draw again
    } catch (const InputError&) {
    }
  }
}

struct Context {
  std::uint64_t seed;
  double tighten;
};

using Check = std::function<CriterionResult(const Context&)>;

CriterionResult rank_one_hankel(const Context& c) {
  Rng rng(c.seed + 1);
  const double tol = 1e-8 / c.tighten;
  double worst = 0;
  for (int t = 0; t < 20; ++t) {
    auto in = random_instance(rng, t % 2 ? 2 : 0, std::size_t(2 + t % 7));
    const auto i = Eigen::Index(rng() % std::uint64_t(in.gram.size()));
    const double k = in.gram.diag(i);
    worst = std::max(worst, std::abs(han_norm(in.gram, in.gram.column(i)) - k) / k);
  }
  return {1, "", worst <= tol, fmt("20 instances, max rel err %.3g (tol %.3g)", worst, tol)};
}

CriterionResult h1_oracle(const Context& c) {
  Rng rng(c.seed + 2);
  const double tol = 1e-4 / c.tighten;
  double worst = 0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + std::size_t(t % 2);
    auto in = random_instance(rng, (t / 2) % 2 ? 2 : 0, n);
    H1Problem p(in.gram, random_values(rng, Eigen::Index(n)));
    const auto est = h1_norm(p);
    if (!est.converged) return {2, "", false, fmt("instance %d: solver did not converge", t)};
    const double bf = h1_norm_bruteforce(p, int(n), 50, c.seed + std::uint64_t(t));
    worst = std::max(worst, std::abs(est.value - bf) / bf);
  }
  return {2, "", worst <= tol, fmt("20 instances N in {2,3}, max rel diff %.3g (tol %.3g)", worst, tol)};
}

CriterionResult han_duality(const Context& c) {
  Rng rng(c.seed + 3);
  const double tol = 0.01 / c.tighten;
  double worst = 0;
  bool bounded = true;
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 2 + std::size_t(t % 5);
    auto in = random_instance(rng, t % 2 ? 2 : 0, n);
    const VectorXc b = in.gram.K() * random_values(rng, Eigen::Index(n));
    const double exact = han_norm(in.gram, b);
    DualProbeOptions opts;
    opts.seed = c.seed + std::uint64_t(t);
    const double dual = han_norm_dual(in.gram, b, 40, opts);
    bounded = bounded && dual <= exact * (1 + 1e-8);
    worst = std::max(worst, (exact - dual) / exact);
  }
  return {3, "", bounded && worst <= tol,
          fmt("10 instances N <= 6, max shortfall %.3g (tol %.3g)%s", worst, tol,
              bounded ? "" : ", dual value exceeded the norm")};
}

struct PairInstance {
  Instance in;
  Eigen::Index i, j;
};

std::vector<PairInstance> metric_pairs(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<PairInstance> out;
  for (int t = 0; t < 50; ++t) {
    const int d = std::array{0, 2, 3}[std::size_t(t % 3)];
    auto in = random_instance(rng, d, std::size_t(2 + t % 4), 0.95);
    const auto n = std::uint64_t(in.gram.size());
    const auto i = Eigen::Index(rng() % n);
    auto j = Eigen::Index(rng() % (n - 1));
    if (j >= i) ++j;
    out.push_back({std::move(in), i, j});
  }
  return out;
}

CriterionResult metric_identity(const Context& c) {
  const double tol = 1e-8 / c.tighten;
  double worst = 0;
  for (const auto& [in, i, j] : metric_pairs(c.seed + 4)) {
    const Complex w = omega_phase(in.gram, i, j);
    const FuncValues b = normalized_kernel(in.gram, i) - std::conj(w) * normalized_kernel(in.gram, j);
    worst = std::max(worst, std::abs(han_norm(in.gram, b) - dk(in.gram, i, j)));
  }
  return {4, "", worst <= tol, fmt("50 pairs (complex Szego, DA(2), DA(3)), max err %.3g (tol %.3g)",
                                  worst, tol)};
}

CriterionResult projection_formula(const Context& c) {
  const double tol = 1e-10 / c.tighten;
  double worst = 0;
  for (const auto& [in, i, j] : metric_pairs(c.seed + 4)) {
    worst = std::max(worst, std::abs(projection_diff_norm(in.gram, i, j) - dk(in.gram, i, j)));
  }
  return {5, "", worst <= tol, fmt("50 pairs, max err %.3g (tol %.3g)", worst, tol)};
}

std::vector<double> decade_grid(double k0, double k1, int points) {
  std::vector<double> r;
  for (int i = 0; i < points; ++i) {
    r.push_back(1 - std::pow(10.0, -(k0 + (k1 - k0) * i / (points - 1))));
  }
  return r;
}

double integral(double r, double e) {
  const auto q = hardy_integral(r, e);
  if (!q.converged) throw NumericalError("quadrature did not converge", r);
  return q.value;
}

CriterionResult hardy_asymptotics(const Context& c) {
  const double slope_tol = 0.02 / c.tighten;
  const double spread_tol = 1.0 / c.tighten;
  const auto grid = decade_grid(1, 6, 11);
  bool pass = true;
  std::string detail = "slopes";
  for (double q : {1.5, 2.0, 3.0}) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double r : grid) {
      const double x = std::log((1 - r) * (1 + r));
      const double y = std::log(integral(r, q));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double m = double(grid.size());
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    pass = pass && std::abs(slope - (1 - q)) <= slope_tol;
    detail += fmt(" q=%g:%.4f", q, slope);
  }
  double lo = 1e300, hi = -1e300, lo_pi = 1e300, hi_pi = -1e300;
  for (double r : grid) {
    const double L = -std::log((1 - r) * (1 + r));
    const double I = integral(r, 1);
    lo = std::min(lo, I - L);
    hi = std::max(hi, I - L);
    lo_pi = std::min(lo_pi, I - L / std::numbers::pi);
    hi_pi = std::max(hi_pi, I - L / std::numbers::pi);
  }
  pass = pass && hi - lo < spread_tol;
  detail += fmt(" (tol %.3g); q=1 spread of I - log(1/(1-r^2)) = %.4f (tol %.3g)", slope_tol, hi - lo,
                spread_tol);
  detail += fmt("; spread of I - log(1/(1-r^2))/pi = %.4f", hi_pi - lo_pi);
  return {6, "", pass, detail};
}

CriterionResult log_upper_bound(const Context& c) {
  const double band_tol = 1 + 1 / c.tighten;
  const double eq_tol = 1e-8 / c.tighten;
  const auto one = PExponent::from_p(1);
  const KernelModel sz(Szego{});
  const KernelModel da(DruryArveson{2});
  double lo = 1e300, hi = 0, diff = 0;
  for (double r : decade_grid(1, 6, 10)) {
    const Point xs = DiscPoint{Complex(r)};
    VectorXc v(2);
    v << Complex(0.6 * r), Complex(0, 0.8 * r);
    const Point xd = BallPoint{v};
    const double k = eval_kernel(sz, xs, xs).real();
    const double ratio = kernel_hq_upper(sz, xs, one) / (1 + std::log(k));
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    const auto rs = thmc1_report(sz, {xs}, {one}).front();
    const auto rd = thmc1_report(da, {xd}, {one}).front();
    diff = std::max({diff, std::abs(rd.ratio_c - rs.ratio_c) / rs.ratio_c,
                     std::abs(rd.ratio_d - rs.ratio_d) / rs.ratio_d});
  }
  const double band = hi / lo;
  return {7, "", band <= band_tol && diff <= eq_tol,
          fmt("band [%.4f, %.4f] width %.4fx (tol %.3gx); DA vs Szego ratio diff %.3g (tol %.3g)", lo, hi,
              band, band_tol, diff, eq_tol)};
}

CriterionResult growth_decay(const Context& c) {
  const double tol = 0.5 / c.tighten;
  bool pass = true;
  std::string detail;
  for (auto rule : {GrowthRule::DoubleExp, GrowthRule::FactorialSq}) {
    std::vector<double> ratios;
    for (int j = 3; j <= 9; ++j) ratios.push_back(example317_ratio(rule, j).ratio);
    bool decreasing = true;
    for (std::size_t i = 1; i < ratios.size(); ++i) decreasing = decreasing && ratios[i] < ratios[i - 1];
    const double q = ratios.back() / ratios.front();
    pass = pass && decreasing && q < tol;
    detail += fmt("%s%s: %s, ratio(9)/ratio(3) = %.4f", detail.empty() ? "" : "; ",
                  rule == GrowthRule::DoubleExp ? "doubleexp" : "factorialsq",
                  decreasing ? "strictly decreasing" : "NOT decreasing", q);
  }
  return {8, "", pass, detail + fmt(" (tol %.3g)", tol)};
}

CriterionResult orthogonal_bounded(const Context& c) {
  const double tol = 1e-12 / c.tighten;
  const auto radii = example316_radii(Example316{}, 64);
  double worst = 0;
  for (std::size_t n = 1; n <= 20; ++n) {
    worst = std::max(worst, std::abs(example316_sup(radii, n) - example316_closed_form(radii, n)));
  }
  double tail = 0;
  for (std::size_t n = 11; n < radii.size(); ++n) tail += 1 - radii[n] * radii[n];
  const double diff = std::abs(example316_sup(radii, 20) - example316_sup(radii, 10));
  const double bound = tail + tol;
  return {9, "", worst <= tol && diff < bound,
          fmt("closed form max err %.3g (tol %.3g); |sup(20) - sup(10)| = %.6g vs sum_{n>10}(1-r_n^2) "
              "+ tol = %.6g",
              worst, tol, diff, bound)};
}

CriterionResult interpolation_dichotomy(const Context& c) {
  const double tol = 0.05 / c.tighten;
  auto cert = [](const SequenceSpec& s) {
    const auto seq = generate(s);
    return is_interpolating(seq.model, seq.points);
  };
  const auto g10 = cert({DiscGeometric{0.5}, 10});
  const auto g12 = cert({DiscGeometric{0.5}, 12});
  const double dc = std::abs(g12.carleson - g10.carleson) / g10.carleson;
  const double dd = std::abs(g12.delta - g10.delta) / g10.delta;
  const bool geo = g10.verdict == Verdict::Interpolating && g12.verdict == Verdict::Interpolating &&
                   dc <= tol && dd <= tol;
  const auto h10 = cert({DiscHarmonic{}, 10});
  const auto h30 = cert({DiscHarmonic{}, 30});
  const bool harm = h30.verdict == Verdict::NotSeparated && h30.delta < (0.5 / c.tighten) * h10.delta;
  return {10, "", geo && harm,
          fmt("1-2^-n: %s/%s, C10 = %.4f C12 = %.4f (change %.3g, tol %.3g), delta change %.3g; "
              "1-1/n: delta10 = %.5f delta30 = %.5f, N=30 %s",
              to_string(g10.verdict).c_str(), to_string(g12.verdict).c_str(), g10.carleson, g12.carleson,
              dc, tol, dd, h10.delta, h30.delta, to_string(h30.verdict).c_str())};
}

CriterionResult restriction_contraction(const Context& c) {
  Rng rng(c.seed + 11);
  const double tol = 1e-6 / c.tighten;
  H1SolverOptions opts;
  opts.tolerance = 1e-9;
  double worst = -1e300;
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 3 + std::size_t(t % 4);
    auto in = random_instance(rng, t % 2 ? 2 : 0, n);
    const VectorXc h = random_values(rng, Eigen::Index(n));
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(1 + rng() % (n - 1));
    std::sort(idx.begin(), idx.end());
    VectorXc hs(Eigen::Index(idx.size()));
    for (std::size_t a = 0; a < idx.size(); ++a) hs(Eigen::Index(a)) = h(Eigen::Index(idx[a]));
    const auto full = h1_norm(H1Problem(in.gram, h), opts);
    const auto sub = h1_norm(H1Problem(gram(in.model, in.points.subset(idx)), hs), opts);
    if (!full.converged || !sub.converged) {
      return {11, "", false, fmt("instance %d: solver did not converge", t)};
    }
    worst = std::max(worst, sub.value - full.value);
  }
  return {11, "", worst <= tol,
          fmt("20 nested pairs, max ||h|V'|| - ||h|| = %.3g (tol %.3g)", worst, tol)};
}

CriterionResult pick_round_trip(const Context& c) {
  Rng rng(c.seed + 12);
  const double tol = 1e-8 / c.tighten;
  double worst = 0;
  for (int t = 0; t < 20; ++t) {
    const int d = std::array{0, 2, 3}[std::size_t(t % 3)];
    auto in = random_instance(rng, d, std::size_t(2 + t % 7));
    Gram g = in.gram;
    if (t % 4 == 3) g = gram(normalize(in.model, in.points[0]), in.points);
    const auto b = pick_embedding(g);
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      for (Eigen::Index j = 0; j < g.size(); ++j) {
        const Complex s = drury_arveson(b[std::size_t(i)], b[std::size_t(j)]);
        worst = std::max(worst, std::abs(s - g(i, j)) / std::max(1.0, std::abs(g(i, j))));
      }
    }
  }
  return {12, "", worst <= tol, fmt("20 restrictions, max rel err %.3g (tol %.3g)", worst, tol)};
}

struct Entry {
  const char* name;
  Check check;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r = {
      {"rank_one_hankel", rank_one_hankel},
      {"h1_oracle", h1_oracle},
      {"han_duality", han_duality},
      {"metric_identity", metric_identity},
      {"projection_formula", projection_formula},
      {"hardy_asymptotics", hardy_asymptotics},
      {"log_upper_bound", log_upper_bound},
      {"growth_decay", growth_decay},
      {"orthogonal_bounded", orthogonal_bounded},
      {"interpolation_dichotomy", interpolation_dichotomy},
      {"restriction_contraction", restriction_contraction},
      {"pick_round_trip", pick_round_trip},
  };
  return r;
}

}  // namespace

std::vector<std::string> criterion_names() {
  std::vector<std::string> out;
  for (const auto& e : registry()) out.emplace_back(e.name);
  return out;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
  if (!(opts.tighten > 0)) throw InputError("tighten factor must be positive");
  const auto& reg = registry();
  std::vector<bool> selected(reg.size(), opts.only.empty());
  for (const auto& name : opts.only) {
    bool found = false;
    for (std::size_t i = 0; i < reg.size(); ++i) {
      if (name == reg[i].name || name == std::to_string(i + 1)) {
        selected[i] = true;
        found = true;
      }
    }
    if (!found) throw InputError("unknown criterion '" + name + "'");
  }
  const Context ctx{opts.seed, opts.tighten};
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < reg.size(); ++i) {
    if (!selected[i]) continue;
    CriterionResult r;
    try {
      r = reg[i].check(ctx);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.id = int(i + 1);
    r.name = reg[i].name;
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  return fmt("%s %2d %-24s %s", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str());
}

}  // namespace hplab
