#include "hplab/weak_product.hpp"

#include <limits>
#include <random>

namespace hplab {

H1Problem::H1Problem(Gram g, FuncValues values) : gram(std::move(g)), h(std::move(values)) {
  if (h.size() != gram.size()) {
    throw InputError("function values and Gram matrix have different sizes");
  }
}

VectorXc product_diagonal(const MatrixXc& Khalf, const MatrixXc& N) {
  // (R N R^T)_ii = sum_b (R N)_ib R_ib
  return (Khalf * N).cwiseProduct(Khalf).rowwise().sum();
}

MatrixXc product_diagonal_adjoint(const MatrixXc& Khalf, const VectorXc& y) {
  return Khalf * y.asDiagonal() * Khalf.transpose();
}

double h1_diag_formula(const Gram& g, const FuncValues& h) {
  if (h.size() != g.size()) throw InputError("function values and Gram matrix have different sizes");
  double s = 0;
  for (Eigen::Index i = 0; i < h.size(); ++i) s += std::abs(h(i)) / g.diag(i);
  return s;
}

namespace {

/// Soft-thresholds the singular values of X by tau.
MatrixXc singular_value_shrink(const MatrixXc& X, double tau) {
  const auto d = svd(X);
  const Eigen::VectorXd s = (d.singular_values.array() - tau).max(0.0);
  return d.U * s.asDiagonal() * d.V.adjoint();
}

}  // namespace

H1Solution h1_solve(const H1Problem& p, const H1SolverOptions& opts) {
  const Eigen::Index n = p.gram.size();
  H1Solution out;
  out.N = MatrixXc::Zero(n, n);
  if (p.h.isZero(0)) {
    out.estimate = NormEstimate{0, 0, 0, 0, 0, "zero", true};
    return out;
  }

  const MatrixXc& R = p.gram.sqrt();
  // The normal operator of N -> diag(R N R^T) is y -> (K o K) y (Hadamard square).
  const MatrixXc G = p.gram.K().cwiseProduct(p.gram.K());
  const Eigen::LLT<MatrixXc> normal(G);
  if (normal.info() != Eigen::Success) {
    throw NumericalError("normal operator of the product constraint is not positive definite");
  }
  auto project = [&](const MatrixXc& X) -> MatrixXc {
    const VectorXc r = product_diagonal(R, X) - p.h;
    return X - product_diagonal_adjoint(R, normal.solve(r));
  };

  double rho = 1.0 / h1_diag_formula(p.gram, p.h);
  MatrixXc M = project(MatrixXc::Zero(n, n));
  MatrixXc U = MatrixXc::Zero(n, n);

  double best_upper = nuclear_norm(M);
  double best_lower = 0;
  MatrixXc best_N = M;
  int it = 0;
  bool converged = false;
  for (; it < opts.max_iterations; ++it) {
    const MatrixXc N = singular_value_shrink(M - U, 1.0 / rho);
    const MatrixXc M_prev = M;
    M = project(N + U);
    U += N - M;

    if ((it + 1) % opts.check_every != 0) continue;

    const double upper = nuclear_norm(M);
    if (upper < best_upper) {
      best_upper = upper;
      best_N = M;
    }
    // rho * U lies in the range of the adjoint; its preimage is a dual point.
    const VectorXc y = normal.solve(product_diagonal(R, U)) * rho;
    const double dual_norm = operator_norm(product_diagonal_adjoint(R, y));
    if (dual_norm > 0) best_lower = std::max(best_lower, std::abs(y.dot(p.h)) / dual_norm);
    if (best_upper - best_lower <= opts.tolerance * best_upper) {
      converged = true;
      ++it;
      break;
    }

    // Residual balancing keeps the primal and dual residuals comparable.
    const double primal = (N - M).norm();
    const double dual = rho * (M - M_prev).norm();
    if (primal > 10 * dual) {
      rho *= 2;
      U /= 2;
    } else if (dual > 10 * primal) {
      rho /= 2;
      U *= 2;
    }
  }

  out.N = best_N;
  out.estimate.value = best_upper;
  out.estimate.upper = best_upper;
  out.estimate.lower = best_lower;
  out.estimate.iterations = it;
  out.estimate.gap = (best_upper - best_lower) / best_upper;
  out.estimate.method = "admm-svt";
  out.estimate.converged = converged;
  return out;
}

NormEstimate h1_norm(const H1Problem& p, const H1SolverOptions& opts) {
  return h1_solve(p, opts).estimate;
}

FactorizationCertificate h1_certificate(const H1Problem& p, const H1SolverOptions& opts) {
  const auto sol = h1_solve(p, opts);
  if (!sol.estimate.converged) {
    throw NumericalError("weak product solver did not converge; no certificate", sol.estimate.gap);
  }
  FactorizationCertificate cert;
  if (sol.estimate.method == "zero") {
    cert.pairs.emplace_back(FuncValues::Zero(p.h.size()), FuncValues::Zero(p.h.size()));
    return cert;
  }

  const MatrixXc& R = p.gram.sqrt();
  const auto d = svd(sol.N);
  const double scale = std::max(1.0, p.h.cwiseAbs().maxCoeff());
  FuncValues acc = FuncValues::Zero(p.h.size());
  for (Eigen::Index k = 0; k < d.singular_values.size(); ++k) {
    const double s = std::sqrt(d.singular_values(k));
    // N = sum_k sigma_k U_k conj(V_k)^T
    FuncValues f = R * (d.U.col(k) * s);
    FuncValues g = R * (d.V.col(k).conjugate() * s);
    acc += f.cwiseProduct(g);
    cert.pairs.emplace_back(std::move(f), std::move(g));
    if ((acc - p.h).cwiseAbs().maxCoeff() <= 1e-9 * scale) break;
  }
  if ((acc - p.h).cwiseAbs().maxCoeff() > 1e-7 * scale) {
    throw NumericalError("certificate does not reproduce h", (acc - p.h).cwiseAbs().maxCoeff());
  }
  for (const auto& [f, g] : cert.pairs) cert.cost += p.gram.norm(f) * p.gram.norm(g);
  return cert;
}

namespace {

/// Local descent on the coefficient matrix N itself, i.e. over all factor
/// families of rank <= n. Smoothed objective tr (N*N + eps^2)^{1/2} on the
/// affine set {N : diag(L N L^T) = h}, BFGS in null-space coordinates, eps
/// lowered by decades. Returns the exact nuclear norm of the final N.
double nuclear_descent_once(const MatrixXc& Z, const VectorXc& x0, const VectorXc& c0, double scale,
                            int max_iter) {
  const Eigen::Index n = Eigen::Index(std::lround(std::sqrt(double(x0.size()))));
  const Eigen::Index m = Z.cols();
  using Vec = Eigen::VectorXd;

  auto coeffs = [&](const Vec& t) {
    return VectorXc(t.head(m).cast<Complex>() + Complex(0, 1) * t.tail(m).cast<Complex>());
  };
  auto matrix = [&](const Vec& t) {
    const VectorXc x = x0 + Z * coeffs(t);
    return MatrixXc(Eigen::Map<const MatrixXc>(x.data(), n, n));
  };
  auto eval = [&](const Vec& t, double eps, Vec* grad) {
    const MatrixXc N = matrix(t);
    Eigen::JacobiSVD<MatrixXc> d(N, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::ArrayXd s = d.singularValues().array();
    const Eigen::ArrayXd root = (s.square() + eps * eps).sqrt();
    if (grad) {
      const MatrixXc W = d.matrixU() * (s / root).matrix().asDiagonal() * d.matrixV().adjoint();
      const VectorXc g = Z.adjoint() * Eigen::Map<const VectorXc>(W.data(), W.size());
      grad->resize(2 * m);
      grad->head(m) = g.real();
      grad->tail(m) = g.imag();
    }
    return root.sum();
  };

  Vec t(2 * m);
  t.head(m) = c0.real();
  t.tail(m) = c0.imag();
  for (double eps = 1e-1 * scale; eps >= 1e-10 * scale; eps /= 10) {
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(2 * m, 2 * m);
    Vec g;
    double f = eval(t, eps, &g);
    bool scaled = false;
    for (int it = 0; it < max_iter; ++it) {
      if (g.norm() <= 1e-13 * (1 + std::abs(f))) break;
      Vec dir = -H * g;
      if (dir.dot(g) >= 0) {
        H.setIdentity();
        dir = -g;
      }
      double step = 1;
      Vec tn, gn;
      double fn = f;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls) {
        tn = t + step * dir;
        fn = eval(tn, eps, &gn);
        if (fn <= f + 1e-4 * step * dir.dot(g)) {
          moved = true;
          break;
        }
        step /= 2;
      }
      if (!moved) break;
      const Vec sv = tn - t;
      const Vec yv = gn - g;
      const double sy = sv.dot(yv);
      if (sy > 1e-16 * sv.norm() * yv.norm()) {
        if (!scaled) {
          H *= sy / yv.squaredNorm();
          scaled = true;
        }
        const double rho = 1 / sy;
        const Eigen::MatrixXd E = Eigen::MatrixXd::Identity(2 * m, 2 * m) - rho * sv * yv.transpose();
        H = E * H * E.transpose() + rho * sv * sv.transpose();
      }
      const bool stalled = f - fn <= 1e-16 * std::abs(f);
      t = tn;
      g = gn;
      f = fn;
      if (stalled) break;
    }
  }
  return nuclear_norm(matrix(t));
}

}  // namespace

double h1_norm_bruteforce(const H1Problem& p, int max_rank, int starts, std::uint64_t seed,
                          int sweeps) {
  const Eigen::Index n = p.gram.size();
  if (n > 4) throw InputError("brute-force H1 oracle is limited to 4 points");
  if (max_rank < 1) throw InputError("max_rank must be >= 1");
  if (p.h.isZero(0)) return 0;

  // Cholesky coordinates: f = L a has ||f||_M = ||a||.
  const Eigen::LLT<MatrixXc> chol(p.gram.K());
  if (chol.info() != Eigen::Success) throw NumericalError("Cholesky factorization failed");
  const MatrixXc L = chol.matrixL();
  const Eigen::Index r = max_rank;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  const double feas_tol = 1e-10 * std::max(1.0, p.h.norm());
  double best = std::numeric_limits<double>::infinity();

  if (r >= n) {
    // sum_m (L a_m) * (L b_m) = diag(L N L^T) with N = A B^T, linear in vec(N).
    MatrixXc M(n, n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index b = 0; b < n; ++b) {
        for (Eigen::Index a = 0; a < n; ++a) M(i, a + b * n) = L(i, a) * L(i, b);
      }
    }
    Eigen::JacobiSVD<MatrixXc> d(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const VectorXc x0 = d.solve(p.h);
    if ((M * x0 - p.h).norm() > feas_tol) {
      throw NumericalError("brute-force oracle: constraint map is singular", (M * x0 - p.h).norm());
    }
    const MatrixXc Z = d.matrixV().rightCols(n * n - n);
    const double scale = std::max(x0.norm(), 1e-300);
    for (int s = 0; s < starts; ++s) {
      VectorXc c0(Z.cols());
      for (Eigen::Index k = 0; k < c0.size(); ++k) {
        c0(k) = Complex(gauss(rng), gauss(rng)) * (scale / std::sqrt(double(Z.cols())));
      }
      best = std::min(best, nuclear_descent_once(Z, x0, c0, scale, sweeps));
    }
    return best;
  }

  // Rank-limited search: alternate minimal-norm solves for A and B
  // (n x r coefficient blocks) with sum_m (L a_m) * (L b_m) = h.
  auto solve_side = [&](const MatrixXc& B, MatrixXc& A) -> double {
    const MatrixXc W = L * B;
    MatrixXc T(n, n * r);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index m = 0; m < r; ++m) {
        T.block(i, m * n, 1, n) = L.row(i) * W(i, m);
      }
    }
    const VectorXc a = T.completeOrthogonalDecomposition().solve(p.h);
    A = Eigen::Map<const MatrixXc>(a.data(), n, r);
    return (T * a - p.h).norm();
  };
  auto balance = [&](MatrixXc& A, MatrixXc& B) {
    for (Eigen::Index m = 0; m < r; ++m) {
      const double na = A.col(m).norm();
      const double nb = B.col(m).norm();
      if (na > 0 && nb > 0) {
        const double t = std::sqrt(nb / na);
        A.col(m) *= t;
        B.col(m) /= t;
      }
    }
  };
  auto cost = [&](const MatrixXc& A, const MatrixXc& B) {
    double c = 0;
    for (Eigen::Index m = 0; m < r; ++m) c += A.col(m).norm() * B.col(m).norm();
    return c;
  };

  for (int s = 0; s < starts; ++s) {
    MatrixXc A(n, r);
    MatrixXc B(n, r);
    for (Eigen::Index k = 0; k < B.size(); ++k) B.data()[k] = Complex(gauss(rng), gauss(rng));
    double prev = std::numeric_limits<double>::infinity();
    double current = prev;
    bool feasible = false;
    for (int sweep = 0; sweep < sweeps; ++sweep) {
      feasible = solve_side(B, A) <= feas_tol;
      balance(A, B);
      feasible = solve_side(A, B) <= feas_tol;
      balance(B, A);
      current = cost(A, B);
      if (feasible && prev - current <= 1e-13 * current) break;
      prev = current;
    }
    if (feasible) best = std::min(best, current);
  }
  return best;
}

}  // namespace hplab
