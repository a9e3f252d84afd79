#pragma once

#include <random>

#include "hplab/kernels.hpp"

namespace test {

using hplab::Complex;
using hplab::VectorXc;

inline VectorXc random_values(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  VectorXc v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = g(rng);
    v(i) = Complex(re, g(rng));
  }
  return v;
}

struct Instance {
  hplab::KernelModel model;
  hplab::PointSet points;
  hplab::Gram gram;
};

/// d = 0: Szego on the disc; otherwise Drury-Arveson on the ball in C^d.
inline Instance random_instance(std::mt19937_64& rng, int d, std::size_t n, double rmax = 0.9) {
  std::uniform_real_distribution<double> u(0, 1);
  for (;;) {
    try {
      const int dim = d == 0 ? 1 : d;
      std::vector<VectorXc> vs;
      for (std::size_t i = 0; i < n; ++i) {
        VectorXc v = random_values(rng, dim);
        vs.push_back(v * (rmax * std::pow(u(rng), 1.0 / (2 * dim)) / v.norm()));
      }
      if (d == 0) {
        std::vector<Complex> zs;
        for (const auto& v : vs) zs.push_back(v(0));
        auto pts = hplab::PointSet::disc(zs);
        hplab::KernelModel m(hplab::Szego{});
        return {m, pts, hplab::gram(m, pts)};
      }
      auto pts = hplab::PointSet::ball(vs);
      hplab::KernelModel m(hplab::DruryArveson{d});
      return {m, pts, hplab::gram(m, pts)};
    } catch (const hplab::NumericalError&) {
    }
  }
}

}  // namespace test
