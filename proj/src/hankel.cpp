#include "hplab/hankel.hpp"

#include <algorithm>
#include <random>

namespace hplab {

FuncValues HankelRep::apply(const Gram& g, const FuncValues& f) const {
  if (f.size() != g.size()) throw InputError("function values have the wrong length");
  const VectorXc u = g.inv_sqrt() * f;
  return g.sqrt() * (A * u.conjugate());
}

HankelRep hankel_matrix(const Gram& g, const FuncValues& b) {
  if (b.size() != g.size()) throw InputError("symbol and Gram matrix have different sizes");
  HankelRep rep;
  rep.symbol = b;
  const VectorXc c = g.inverse() * b;
  rep.A = product_diagonal_adjoint(g.sqrt(), c);
  rep.norm = operator_norm(rep.A);
  return rep;
}

double han_norm(const Gram& g, const FuncValues& b) { return hankel_matrix(g, b).norm; }

FuncValues normalized_kernel(const Gram& g, Eigen::Index i) {
  if (i < 0 || i >= g.size()) throw InputError("point index out of range");
  return g.column(i) / g.diag(i);
}

namespace {

struct Probe {
  FuncValues f;
  FuncValues g;
  double ratio = 0;
};

}  // namespace

double han_norm_dual(const Gram& g, const FuncValues& b, int n_probe, const DualProbeOptions& opts) {
  if (b.size() != g.size()) throw InputError("symbol and Gram matrix have different sizes");
  if (b.isZero(0)) return 0;
  const Eigen::Index n = g.size();
  const MatrixXc& K = g.K();
  const VectorXc c = g.inverse() * b;

  // <f g, b>_M = b* K^{-1} (f g) = sum conj(c_i) f_i g_i
  auto ratio = [&](const FuncValues& f, const FuncValues& h) {
    const double nf = g.norm(f);
    const double nh = g.norm(h);
    if (nf == 0 || nh == 0) return 0.0;
    return std::abs(c.dot(f.cwiseProduct(h))) / (nf * nh);
  };
  // For fixed h the best f is the Riesz representer of f -> sum conj(c_i) h_i f_i.
  auto ascend = [&](Probe& p) {
    p.ratio = ratio(p.f, p.g);
    for (int step = 0; step < opts.ascent_steps; ++step) {
      p.f = K * c.cwiseProduct(p.g.conjugate());
      p.g = K * c.cwiseProduct(p.f.conjugate());
      const double r = ratio(p.f, p.g);
      const bool stalled = r <= p.ratio * (1 + 1e-15);
      p.ratio = std::max(p.ratio, r);
      if (stalled) break;
      // Keep magnitudes bounded; ratios are scale invariant.
      p.f /= std::max(g.norm(p.f), 1e-300);
      p.g /= std::max(g.norm(p.g), 1e-300);
    }
  };

  std::vector<Probe> probes;
  for (Eigen::Index a = 0; a < n && int(probes.size()) < n_probe; ++a) {
    for (Eigen::Index bb = a; bb < n && int(probes.size()) < n_probe; ++bb) {
      probes.push_back({g.sqrt().col(a), g.sqrt().col(bb), 0});
    }
  }
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss;
  auto random_values = [&]() {
    FuncValues v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(gauss(rng), gauss(rng));
    return FuncValues(K * v);
  };
  while (int(probes.size()) < n_probe) probes.push_back({random_values(), random_values(), 0});

  for (auto& p : probes) ascend(p);
  std::sort(probes.begin(), probes.end(),
            [](const Probe& x, const Probe& y) { return x.ratio > y.ratio; });

  double best = probes.empty() ? 0.0 : probes.front().ratio;
  for (int k = 0; k < std::min<int>(opts.refine, int(probes.size())); ++k) {
    const FuncValues h = probes[std::size_t(k)].f.cwiseProduct(probes[std::size_t(k)].g);
    if (h.isZero(0)) continue;
    const auto est = h1_norm(H1Problem(g, h));
    // The solver's upper value is a feasible factorization cost, so this
    // quotient never exceeds the Hankel norm.
    if (est.upper > 0) best = std::max(best, std::abs(c.dot(h)) / est.upper);
  }
  return best;
}

double projection_diff_norm(const Gram& g, Eigen::Index i, Eigen::Index j) {
  if (i < 0 || j < 0 || i >= g.size() || j >= g.size()) throw InputError("index out of range");
  if (i == j) return 0.0;
  const VectorXc ui = g.sqrt().col(i) / std::sqrt(g.diag(i));
  const VectorXc uj = g.sqrt().col(j) / std::sqrt(g.diag(j));
  return operator_norm(MatrixXc(ui * ui.adjoint() - uj * uj.adjoint()));
}

}  // namespace hplab
