#pragma once

// Point sets, kernel models, validated Gram matrices, the Drury-Arveson
// embedding of a normalized complete Pick kernel, and the pseudo-metric d_k.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hplab/numerics.hpp"

namespace hplab {

struct DiscPoint {
  Complex z;
};

struct BallPoint {
  VectorXc v;
};

struct AbstractIndex {
  std::size_t i;
};

using Point = std::variant<DiscPoint, BallPoint, AbstractIndex>;

std::string to_string(const Point& p);

/// Ordered, pairwise distinct points. Disc and ball points must lie strictly
/// inside the unit ball (norm < 1 - 1e-12).
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::vector<Point> points);

  static PointSet disc(const std::vector<Complex>& zs);
  static PointSet ball(const std::vector<VectorXc>& vs);
  static PointSet abstract(std::size_t n);

  std::size_t size() const { return points_.size(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Point>& points() const { return points_; }

  /// Points at the given positions, in the given order.
  PointSet subset(const std::vector<std::size_t>& idx) const;

 private:
  std::vector<Point> points_;
};

class KernelModel;

struct Szego {};

struct DruryArveson {
  int d = 1;
};

/// k(i,j) = 1 / (1 - <b_i, b_j>) on abstract points.
struct NormalizedEmbedding {
  std::vector<VectorXc> b;
};

/// Kernel given directly by its matrix on abstract points 0..n-1.
struct ExplicitGram {
  MatrixXc K;
};

/// k(x,y) k(x0,x0) / (k(x,x0) k(x0,y)) for an underlying kernel k.
struct Renormalized {
  std::shared_ptr<const KernelModel> base;
  Point x0;
};

class KernelModel {
 public:
  using Variant = std::variant<Szego, DruryArveson, NormalizedEmbedding, ExplicitGram, Renormalized>;

  KernelModel(Variant v);  // NOLINT(google-explicit-constructor)

  const Variant& variant() const { return v_; }

  /// A point x0 with k(x0, y) == 1 for all y, when known.
  const std::optional<Point>& basepoint() const { return basepoint_; }

  std::string name() const;

 private:
  Variant v_;
  std::optional<Point> basepoint_;
};

Complex eval_kernel(const KernelModel& model, const Point& x, const Point& y);

/// Raw kernel matrix K(i,j) = k(x_i, x_j) with no conditioning checks.
MatrixXc kernel_matrix(const KernelModel& model, const PointSet& pts);

/// Validated Gram matrix with eagerly computed K^{1/2}, K^{-1/2} and K^{-1}.
///
/// Construction refuses matrices that are not positive definite or whose
/// condition number exceeds `max_condition` (points too close together).
class Gram {
 public:
  static constexpr double kMaxCondition = 1e12;

  explicit Gram(const MatrixXc& K, double max_condition = kMaxCondition);

  Eigen::Index size() const { return K_.dim(); }
  const MatrixXc& K() const { return K_.matrix(); }
  const MatrixXc& sqrt() const { return half_.matrix(); }
  const MatrixXc& inv_sqrt() const { return half_inv_.matrix(); }
  const MatrixXc& inverse() const { return inv_; }
  double condition_number() const { return cond_; }

  Complex operator()(Eigen::Index i, Eigen::Index j) const { return K_(i, j); }
  double diag(Eigen::Index i) const { return K_(i, i).real(); }
  /// Values of k_{x_j} on the point set.
  VectorXc column(Eigen::Index j) const { return K_.matrix().col(j); }

  /// M-norm of a function given by its values: sqrt(f* K^{-1} f).
  double norm(const VectorXc& f) const;
  /// <f, g>_M = g* K^{-1} f (linear in f).
  Complex inner(const VectorXc& f, const VectorXc& g) const;

 private:
  HermMatrix K_;
  HermMatrix half_;
  HermMatrix half_inv_;
  MatrixXc inv_;
  double cond_ = 0;
};

Gram gram(const KernelModel& model, const PointSet& pts);

KernelModel normalize(const KernelModel& model, const Point& x0);

/// Ball vectors b(x_i) with <b(x_i), b(x_j)> = 1 - 1/K(i,j).
///
/// Throws NotCompletePickError when 1 - 1/K is not positive semidefinite.
std::vector<VectorXc> pick_embedding(const Gram& g);

double dk(const Gram& g, Eigen::Index i, Eigen::Index j);
double dk(const MatrixXc& K, Eigen::Index i, Eigen::Index j);

/// omega = K(i,j) / conj(K(i,j)), so <k_y, k_x> = omega <k_x, k_y>; 1 when K(i,j) = 0.
Complex omega_phase(const Gram& g, Eigen::Index i, Eigen::Index j);

/// S(z, w) = 1 / (1 - <z, w>).
Complex drury_arveson(const VectorXc& z, const VectorXc& w);

}  // namespace hplab
