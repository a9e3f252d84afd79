#pragma once

// Interpolating-sequence tests (weak separation plus the Carleson condition),
// dual bases, and the two counterexample families.

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "hplab/kernels.hpp"
#include "hplab/weak_product.hpp"

namespace hplab {

/// x_n = 1 - ratio^n, n = 1..N
struct DiscGeometric {
  double ratio = 0.5;
};

/// x_n = 1 - 1/n, n = 1..N
struct DiscHarmonic {};

struct DiscCustom {
  std::vector<Complex> points;
};

/// Orthogonal ball points x_n = r_n e_n, given by 1 - r_n^2 = decay^{-n}
/// (n = 0..N-1, so r_0 = 0) or by an explicit radius list.
struct Example316 {
  std::vector<double> radii;
  double decay = 4;
};

enum class GrowthRule { DoubleExp, FactorialSq };

/// x_n = 1 - 1/y_n on the real axis.
struct Example317 {
  GrowthRule rule = GrowthRule::DoubleExp;
  int j_max = 9;
};

struct SequenceSpec {
  std::variant<DiscGeometric, DiscHarmonic, DiscCustom, Example316, Example317> generator;
  std::size_t truncation = 10;
};

struct GeneratedSequence {
  KernelModel model;
  PointSet points;
};

/// Builds the first `truncation` points with their kernel. Growth-rule points
/// are produced while 1 - x_n is still representable; use example317_ratio
/// for large indices.
GeneratedSequence generate(const SequenceSpec& spec);

/// Radii for the orthogonal-point family: explicit list, or 1 - r_n^2 = decay^{-n}.
std::vector<double> example316_radii(const Example316& ex, std::size_t n);

enum class Verdict { Interpolating, NotSeparated, CarlesonUnbounded, Inconclusive };

std::string to_string(Verdict v);

struct InterpCertificate {
  double delta = 0;
  double carleson = 0;  // NaN when not computed
  std::vector<double> dual_norms;  // ||f_n||^2 k(x_n,x_n)
  Verdict verdict = Verdict::Inconclusive;
  std::string note;
};

/// min over m != n of d_k(x_m, x_n)
double weak_separation(const Gram& g);
double weak_separation(const MatrixXc& K);

/// Best C with sum |f(x_n)|^2 / k(x_n,x_n) <= C ||f||^2, i.e.
/// lambda_max(K^{1/2} D_w K^{1/2}) with w_n = 1/k(x_n,x_n).
double carleson_constant(const Gram& g);

struct DualBasis {
  MatrixXc coefficients;  // column n: kernel coefficients of f_n (K^{-1} e_n)
  MatrixXc values;        // column n: f_n on the point set
  std::vector<double> scaled_norms;  // ||f_n||^2 k(x_n, x_n)
};

DualBasis dual_basis(const Gram& g);

inline constexpr double kDefaultDeltaMin = 0.05;
inline constexpr double kDefaultCarlesonMax = 100;

InterpCertificate is_interpolating(const Gram& g, double delta_min = kDefaultDeltaMin,
                                   double c_max = kDefaultCarlesonMax);

/// Separation is read off the raw kernel matrix first, so sequences whose
/// Gram is too ill-conditioned to factor can still be rejected as not
/// separated. A separated sequence with an unusable Gram is inconclusive.
InterpCertificate is_interpolating(const KernelModel& model, const PointSet& pts,
                                   double delta_min = kDefaultDeltaMin,
                                   double c_max = kDefaultCarlesonMax);

/// sup_j sum_n |K(n,j)| / K(n,n) for the orthogonal-point kernel on N points.
double example316_sup(const std::vector<double>& radii, std::size_t N);

/// 1 + sum_{n != j} (1 - r_n^2), maximized over j.
double example316_closed_form(const std::vector<double>& radii, std::size_t N);

struct Example317Ratio {
  int j = 0;
  double log_y = 0;  // log y_j
  double log_k = 0;  // log k(x_j, x_j)
  double sum = 0;    // sum_n (1 - x_n^2) / (1 - x_n x_j)
  double ratio = 0;  // sum / log_k
  double tail_bound = 0;
  int terms = 0;
};

/// log y_n for the growth rule. DoubleExp: y_0 = 1, y_n = 2^{2^n}.
/// FactorialSq: y_n = (n!)^2 for n >= 1, so y_1 = 1 plays the base point.
double log_growth(GrowthRule rule, int n);
int first_index(GrowthRule rule);

/// Computed entirely from log y_n; no y_n or 1 - x_n is ever formed.
Example317Ratio example317_ratio(GrowthRule rule, int j);

}  // namespace hplab
