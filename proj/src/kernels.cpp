#include "hplab/kernels.hpp"

#include <iomanip>
#include <sstream>

namespace hplab {
namespace {

constexpr double kBoundaryMargin = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool same_point(const Point& a, const Point& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      overloaded{
          [&](const DiscPoint& p) { return p.z == std::get<DiscPoint>(b).z; },
          [&](const BallPoint& p) {
            const auto& q = std::get<BallPoint>(b).v;
            return p.v.size() == q.size() && p.v == q;
          },
          [&](const AbstractIndex& p) { return p.i == std::get<AbstractIndex>(b).i; },
      },
      a);
}

void validate_point(const Point& p) {
  std::visit(overloaded{
                 [](const DiscPoint& d) {
                   if (!(std::abs(d.z) < 1 - kBoundaryMargin)) {
                     throw InputError("disc point outside the open unit disc: " +
                                      to_string(Point{d}));
                   }
                 },
                 [](const BallPoint& b) {
                   if (b.v.size() < 1) throw InputError("ball point must have dimension >= 1");
                   if (!(b.v.norm() < 1 - kBoundaryMargin)) {
                     throw InputError("ball point outside the open unit ball");
                   }
                 },
                 [](const AbstractIndex&) {},
             },
             p);
}

/// Ball coordinates of a point for the Drury-Arveson kernel of dimension d.
VectorXc ball_coords(const Point& p, int d) {
  if (const auto* b = std::get_if<BallPoint>(&p)) {
    if (b->v.size() != d) {
      throw InputError("ball point dimension does not match Drury-Arveson d");
    }
    return b->v;
  }
  if (const auto* z = std::get_if<DiscPoint>(&p); z && d == 1) {
    VectorXc v(1);
    v(0) = z->z;
    return v;
  }
  throw InputError("Drury-Arveson kernel needs ball points (or disc points when d = 1)");
}

std::size_t abstract_index(const Point& p, std::size_t n, const char* model) {
  const auto* a = std::get_if<AbstractIndex>(&p);
  if (!a) throw InputError(std::string(model) + " kernel needs abstract index points");
  if (a->i >= n) throw InputError(std::string(model) + " index out of range");
  return a->i;
}

std::optional<Point> find_basepoint(const KernelModel::Variant& v) {
  return std::visit(
      overloaded{
          [](const Szego&) -> std::optional<Point> { return Point{DiscPoint{0.0}}; },
          [](const DruryArveson& da) -> std::optional<Point> {
            return Point{BallPoint{VectorXc::Zero(da.d)}};
          },
          [](const NormalizedEmbedding& e) -> std::optional<Point> {
            for (std::size_t i = 0; i < e.b.size(); ++i) {
              if (e.b[i].isZero(0)) return Point{AbstractIndex{i}};
            }
            return std::nullopt;
          },
          [](const ExplicitGram& g) -> std::optional<Point> {
            for (Eigen::Index i = 0; i < g.K.rows(); ++i) {
              if ((g.K.row(i).array() == Complex(1.0)).all()) {
                return Point{AbstractIndex{std::size_t(i)}};
              }
            }
            return std::nullopt;
          },
          [](const Renormalized& r) -> std::optional<Point> { return r.x0; },
      },
      v);
}

}  // namespace

std::string to_string(const Point& p) {
  std::ostringstream os;
  os << std::setprecision(17);
  std::visit(overloaded{
                 [&](const DiscPoint& d) { os << d.z.real() << (d.z.imag() < 0 ? "-" : "+")
                                              << std::abs(d.z.imag()) << "i"; },
                 [&](const BallPoint& b) {
                   os << "(";
                   for (Eigen::Index k = 0; k < b.v.size(); ++k) {
                     if (k) os << ";";
                     os << b.v(k).real() << (b.v(k).imag() < 0 ? "-" : "+")
                        << std::abs(b.v(k).imag()) << "i";
                   }
                   os << ")";
                 },
                 [&](const AbstractIndex& a) { os << "#" << a.i; },
             },
             p);
  return os.str();
}

PointSet::PointSet(std::vector<Point> points) : points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    validate_point(points_[i]);
    for (std::size_t j = 0; j < i; ++j) {
      if (same_point(points_[i], points_[j])) {
        throw InputError("duplicate point " + to_string(points_[i]));
      }
    }
  }
}

PointSet PointSet::disc(const std::vector<Complex>& zs) {
  std::vector<Point> pts;
  pts.reserve(zs.size());
  for (const auto& z : zs) pts.emplace_back(DiscPoint{z});
  return PointSet(std::move(pts));
}

PointSet PointSet::ball(const std::vector<VectorXc>& vs) {
  std::vector<Point> pts;
  pts.reserve(vs.size());
  for (const auto& v : vs) pts.emplace_back(BallPoint{v});
  return PointSet(std::move(pts));
}

PointSet PointSet::abstract(std::size_t n) {
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pts.emplace_back(AbstractIndex{i});
  return PointSet(std::move(pts));
}

PointSet PointSet::subset(const std::vector<std::size_t>& idx) const {
  std::vector<Point> pts;
  pts.reserve(idx.size());
  for (auto i : idx) {
    if (i >= points_.size()) throw InputError("subset index out of range");
    pts.push_back(points_[i]);
  }
  return PointSet(std::move(pts));
}

KernelModel::KernelModel(Variant v) : v_(std::move(v)) {
  std::visit(overloaded{
                 [](const Szego&) {},
                 [](const DruryArveson& da) {
                   if (da.d < 1) throw InputError("Drury-Arveson dimension must be >= 1");
                 },
                 [](const NormalizedEmbedding& e) {
                   for (const auto& b : e.b) {
                     if (!(b.norm() < 1 - kBoundaryMargin)) {
                       throw InputError("embedding vectors must have norm < 1");
                     }
                   }
                 },
                 [](const ExplicitGram& g) {
                   if (g.K.rows() != g.K.cols() || g.K.rows() < 1) {
                     throw InputError("explicit Gram must be square and nonempty");
                   }
                   if ((g.K - g.K.adjoint()).norm() > 1e-12 * (1 + g.K.norm())) {
                     throw InputError("explicit Gram must be Hermitian");
                   }
                   for (Eigen::Index i = 0; i < g.K.rows(); ++i) {
                     if (!(g.K(i, i).real() > 0)) {
                       throw InputError("explicit Gram must have a positive diagonal");
                     }
                   }
                 },
                 [](const Renormalized& r) {
                   if (!r.base) throw InputError("renormalized kernel without a base kernel");
                 },
             },
             v_);
  basepoint_ = find_basepoint(v_);
}

std::string KernelModel::name() const {
  return std::visit(overloaded{
                        [](const Szego&) { return std::string("szego"); },
                        [](const DruryArveson& da) { return "da" + std::to_string(da.d); },
                        [](const NormalizedEmbedding&) { return std::string("embedding"); },
                        [](const ExplicitGram&) { return std::string("gram"); },
                        [](const Renormalized& r) { return r.base->name() + "-normalized"; },
                    },
                    v_);
}

Complex drury_arveson(const VectorXc& z, const VectorXc& w) {
  // <z, w> = sum z_k conj(w_k); Eigen's dot conjugates its first argument.
  return 1.0 / (1.0 - w.dot(z));
}

Complex eval_kernel(const KernelModel& model, const Point& x, const Point& y) {
  return std::visit(
      overloaded{
          [&](const Szego&) -> Complex {
            const auto* a = std::get_if<DiscPoint>(&x);
            const auto* b = std::get_if<DiscPoint>(&y);
            if (!a || !b) throw InputError("Szego kernel needs disc points");
            return 1.0 / (1.0 - std::conj(b->z) * a->z);
          },
          [&](const DruryArveson& da) -> Complex {
            return drury_arveson(ball_coords(x, da.d), ball_coords(y, da.d));
          },
          [&](const NormalizedEmbedding& e) -> Complex {
            const auto i = abstract_index(x, e.b.size(), "embedding");
            const auto j = abstract_index(y, e.b.size(), "embedding");
            if (e.b[i].size() != e.b[j].size()) {
              throw InputError("embedding vectors have inconsistent dimensions");
            }
            return drury_arveson(e.b[i], e.b[j]);
          },
          [&](const ExplicitGram& g) -> Complex {
            const auto n = std::size_t(g.K.rows());
            return g.K(Eigen::Index(abstract_index(x, n, "explicit Gram")),
                       Eigen::Index(abstract_index(y, n, "explicit Gram")));
          },
          [&](const Renormalized& r) -> Complex {
            const Complex kx0 = eval_kernel(*r.base, x, r.x0);
            const Complex k0y = eval_kernel(*r.base, r.x0, y);
            if (kx0 == 0.0 || k0y == 0.0) {
              throw NumericalError("cannot normalize: kernel vanishes against the base point");
            }
            const Complex k00 = eval_kernel(*r.base, r.x0, r.x0);
            return eval_kernel(*r.base, x, y) * k00 / (kx0 * k0y);
          },
      },
      model.variant());
}

MatrixXc kernel_matrix(const KernelModel& model, const PointSet& pts) {
  const auto n = Eigen::Index(pts.size());
  MatrixXc K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      K(i, j) = eval_kernel(model, pts[std::size_t(i)], pts[std::size_t(j)]);
    }
  }
  return K;
}

Gram::Gram(const MatrixXc& K, double max_condition)
    : K_(K), half_(K_.matrix()), half_inv_(K_.matrix()) {
  const auto d = herm_eig(K_);
  const double lo = d.eigenvalues.minCoeff();
  const double hi = d.eigenvalues.maxCoeff();
  if (!(hi > 0) || !(lo > 1e-12 * hi)) {
    std::ostringstream msg;
    msg << "Gram matrix is not positive definite (eigenvalues " << lo << " .. " << hi << ")";
    throw NumericalError(msg.str(), lo);
  }
  cond_ = hi / lo;
  if (cond_ > max_condition) {
    std::ostringstream msg;
    msg << "Gram matrix condition number " << cond_ << " exceeds " << max_condition
        << "; points are too close together";
    throw NumericalError(msg.str(), cond_);
  }
  half_ = HermMatrix(spectral_apply(d, [](double x) { return std::sqrt(x); }), 1e-10);
  half_inv_ = HermMatrix(spectral_apply(d, [](double x) { return 1 / std::sqrt(x); }), 1e-10);
  inv_ = spectral_apply(d, [](double x) { return 1 / x; });
  const double err = (half_.matrix() * half_.matrix() - K_.matrix()).norm();
  if (err > 1e-8 * (1 + K_.matrix().norm())) {
    throw NumericalError("Gram square root reconstruction error too large", err);
  }
}

double Gram::norm(const VectorXc& f) const { return std::sqrt(std::max(0.0, inner(f, f).real())); }

Complex Gram::inner(const VectorXc& f, const VectorXc& g) const {
  if (f.size() != size() || g.size() != size()) {
    throw InputError("function value vector has the wrong length");
  }
  return g.dot(inv_ * f);
}

Gram gram(const KernelModel& model, const PointSet& pts) {
  if (pts.size() == 0) throw InputError("Gram matrix of an empty point set");
  return Gram(kernel_matrix(model, pts));
}

KernelModel normalize(const KernelModel& model, const Point& x0) {
  const Complex k00 = eval_kernel(model, x0, x0);
  if (k00 == 0.0) throw NumericalError("cannot normalize at a point with k(x0,x0) = 0");
  return KernelModel(Renormalized{std::make_shared<const KernelModel>(model), x0});
}

std::vector<VectorXc> pick_embedding(const Gram& g) {
  const Eigen::Index n = g.size();
  MatrixXc F(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (g(i, j) == 0.0) {
        throw NotCompletePickError("kernel vanishes on the point set; not a complete Pick kernel");
      }
      F(i, j) = 1.0 - 1.0 / g(i, j);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(F(i, i).imag()) > 1e-12 * (1 + std::abs(F(i, i)))) {
      throw InputError("kernel diagonal is not real; normalize the kernel first");
    }
  }
  const auto d = herm_eig(HermMatrix(F, 1e-10));
  const double hi = std::max(d.eigenvalues.maxCoeff(), 0.0);
  const double lo = d.eigenvalues.minCoeff();
  if (lo < -1e-10 * std::max(1.0, hi)) {
    std::ostringstream msg;
    msg << "not a complete Pick kernel on this set: 1 - 1/K has eigenvalue " << lo;
    throw NotCompletePickError(msg.str(), lo);
  }

  // Keep the directions that carry the factorization, largest first.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    if (d.eigenvalues(k) > 1e-14 * std::max(1.0, hi)) keep.push_back(k);
  }
  const Eigen::Index rank = std::max<Eigen::Index>(1, Eigen::Index(keep.size()));
  std::vector<VectorXc> b(std::size_t(n), VectorXc::Zero(rank));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    const double s = std::sqrt(d.eigenvalues(keep[c]));
    for (Eigen::Index i = 0; i < n; ++i) {
      b[std::size_t(i)](Eigen::Index(c)) = d.eigenvectors(i, keep[c]) * s;
    }
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Complex s = drury_arveson(b[std::size_t(i)], b[std::size_t(j)]);
      const double err = std::abs(s - g(i, j));
      if (!(err <= 1e-8 * std::max(1.0, std::abs(g(i, j))))) {
        throw NumericalError("Pick embedding does not reproduce the kernel", err);
      }
    }
  }
  return b;
}

double dk(const MatrixXc& K, Eigen::Index i, Eigen::Index j) {
  if (i < 0 || j < 0 || i >= K.rows() || j >= K.rows()) throw InputError("dk index out of range");
  if (i == j) return 0.0;
  const double ratio = std::norm(K(i, j)) / (K(i, i).real() * K(j, j).real());
  return std::sqrt(std::clamp(1.0 - ratio, 0.0, 1.0));
}

double dk(const Gram& g, Eigen::Index i, Eigen::Index j) { return dk(g.K(), i, j); }

Complex omega_phase(const Gram& g, Eigen::Index i, Eigen::Index j) {
  if (i < 0 || j < 0 || i >= g.size() || j >= g.size()) {
    throw InputError("omega_phase index out of range");
  }
  const Complex kij = g(i, j);
  if (kij == 0.0) return 1.0;
  const Complex u = kij / std::abs(kij);
  return u * u;
}

}  // namespace hplab
