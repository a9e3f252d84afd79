#pragma once

// Hankel operators H_b on a finite point set.
//
// Coordinates: a function f (value vector) has whitened coordinates
// u = K^{-1/2} f, and the symbol b has kernel coefficients c = K^{-1} b.
// With A = K^{1/2} diag(c) K^{1/2 T}, the operator H_b sends f to the
// conjugate of g = K^{1/2} A conj(u), which is the unique element satisfying
//
//   <phi, g>_M = <phi f, b>_M   for every phi on the point set,
//
// so ||b||_Han = ||H_b|| = ||A||. A is complex symmetric (A = A^T). This
// placement of conjugations is pinned by the pairing identity and by
// ||k_x||_Han = k(x,x), both exercised in the tests on complex Grams.
//
// Every Hankel operator on a finite point set is compact, so Han_0 needs no
// separate representation here.

#include <cstdint>

#include "hplab/weak_product.hpp"

namespace hplab {

struct HankelRep {
  FuncValues symbol;
  MatrixXc A;
  double norm = 0;

  /// Values g with H_b f = conj(g), i.e. <phi, g>_M = <phi f, b>_M.
  FuncValues apply(const Gram& g, const FuncValues& f) const;
};

HankelRep hankel_matrix(const Gram& g, const FuncValues& b);
double han_norm(const Gram& g, const FuncValues& b);

struct DualProbeOptions {
  int ascent_steps = 200;
  int refine = 3;  // best probes re-normalized by the weak product solver
  std::uint64_t seed = 20240501;
};

/// Lower bound on ||b||_Han from the pairing with H^1:
///   sup |<b, h>_M| / ||h||_{H^1}
/// over n_probe probes h = f g (kernel-pair products, random products and
/// alternating ascent in value coordinates). The best probes are divided by
/// the weak product solver's upper estimate of ||h||_{H^1}.
double han_norm_dual(const Gram& g, const FuncValues& b, int n_probe,
                     const DualProbeOptions& opts = {});

/// ||P_{u_i} - P_{u_j}|| for the unit kernel directions u = k_x / sqrt(k(x,x)).
double projection_diff_norm(const Gram& g, Eigen::Index i, Eigen::Index j);

/// b_x = k_x / k(x,x)
FuncValues normalized_kernel(const Gram& g, Eigen::Index i);

}  // namespace hplab
