#pragma once

// Weak product norms ||h||_{H^1(k|V)} on a finite point set V.
//
// Whitening f = K^{1/2} u makes ||f||_M = ||u||, and a product of two
// functions becomes (K^{1/2} u) * (K^{1/2} v) = diag(K^{1/2} u v^T K^{1/2 T}).
// The infimum over sums of products is therefore the nuclear-norm program
//
//   min ||N||_*   subject to   diag(K^{1/2} N K^{1/2 T}) = h,
//
// whose dual is max Re<h, y> over ||K^{1/2} diag(y) K^{1/2 T}|| <= 1. The
// transpose (not the adjoint) appears because products are not conjugated.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hplab/kernels.hpp"

namespace hplab {

using FuncValues = VectorXc;

/// A computed norm: a value, a certified bracket when available, and how it
/// was obtained.
struct NormEstimate {
  double value = 0;
  double lower = 0;
  double upper = 0;
  int iterations = 0;
  double gap = 0;  // relative primal-dual gap
  std::string method;
  bool converged = true;
};

struct H1Problem {
  H1Problem(Gram g, FuncValues h);

  Gram gram;
  FuncValues h;
};

struct H1SolverOptions {
  double tolerance = 1e-6;  // relative primal-dual gap
  int max_iterations = 20000;
  int check_every = 10;
};

struct H1Solution {
  NormEstimate estimate;
  MatrixXc N;  // best feasible whitened coefficient matrix
};

H1Solution h1_solve(const H1Problem& p, const H1SolverOptions& opts = {});
NormEstimate h1_norm(const H1Problem& p, const H1SolverOptions& opts = {});

struct FactorizationCertificate {
  std::vector<std::pair<FuncValues, FuncValues>> pairs;
  double cost = 0;  // sum ||f_n||_M ||g_n||_M
};

/// Pairs (f_n, g_n) with sum f_n g_n = h, read off the singular triples of the
/// optimal coefficient matrix. Throws NumericalError when the solver did not
/// converge.
FactorizationCertificate h1_certificate(const H1Problem& p, const H1SolverOptions& opts = {});

/// Upper bound on ||h||_{H^1} from the best of `starts` local descents over
/// `max_rank` factor pairs, in Cholesky coordinates. With max_rank >= n the
/// descent runs on the coefficient matrix (smoothed nuclear norm, BFGS,
/// `sweeps` iterations per smoothing level); below that it alternates
/// minimal-norm solves for the two factor blocks. Small point sets only.
double h1_norm_bruteforce(const H1Problem& p, int max_rank, int starts = 50,
                          std::uint64_t seed = 20240501, int sweeps = 400);

/// sum_n |h(x_n)| / k(x_n, x_n)
double h1_diag_formula(const Gram& g, const FuncValues& h);

/// The linear map N -> diag(K^{1/2} N K^{1/2 T}) and its adjoint.
VectorXc product_diagonal(const MatrixXc& Khalf, const MatrixXc& N);
MatrixXc product_diagonal_adjoint(const MatrixXc& Khalf, const VectorXc& y);

}  // namespace hplab
