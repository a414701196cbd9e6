#pragma once

// Concrete Banach algebras with Hermitian elements.
//
// Diagonal operators on l1/l2/l-infinity, self-adjoint matrices on l2, general
// matrices with an induced norm, and Fourier multipliers on trigonometric
// polynomials of degree <= N with the circle sup norm. The canonical
// multiplier D_N (m_k = k) is the discrete -i d/dx: exp(itD_N) translates by t.

#include "usym/linalg.hpp"
#include "usym/symbols.hpp"
#include "usym/types.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace usym {

enum class NormTag { op_l1, op_l2, op_linf, trig_sup };

struct NormKind {
  NormTag tag = NormTag::op_l2;
  int degree = 0; // trig_sup only

  friend bool operator==(const NormKind&, const NormKind&) = default;
};

std::string to_string(NormKind k);

struct AlgebraElement {
  enum class Kind { diag_lp, self_adjoint_l2, multiplier, general };

  Kind kind = Kind::general;
  NormKind norm;
  Eigen::VectorXcd values;  // diagonal entries, or multiplier m_{-N..N}
  Eigen::MatrixXcd matrix;  // self_adjoint_l2 and general

  /// p in {1, 2, 0}; 0 stands for p = infinity.
  static AlgebraElement diag_lp(int p, const Eigen::VectorXcd& diag);
  static AlgebraElement self_adjoint(const Eigen::MatrixXcd& a);
  static AlgebraElement multiplier(const Eigen::VectorXcd& m);
  static AlgebraElement general(const Eigen::MatrixXcd& a, NormKind norm);
  /// D_N scaled by s: m_k = s k.
  static AlgebraElement generator(int n, double s = 1.0);

  int dim() const;
  /// Multiplier degree N (values has 2N + 1 entries).
  int degree() const { return static_cast<int>(values.size() - 1) / 2; }
  Complex multiplier_value(int k) const { return values(k + degree()); }
  /// Dense matrix of the element (diagonal kinds expand); multipliers act on
  /// the coefficient vector (e^{-iNx}, ..., e^{iNx}).
  Eigen::MatrixXcd dense() const;
};

/// Operator norm, or a bracket when no cheap exact value exists.
struct NormValue {
  double lower = 0;
  double upper = 0;
  bool exact = false;
  bool inconclusive = false;
  std::string witness; // test function attaining `lower` (brackets only)

  double value() const { return exact ? lower : upper; }
};

struct TrigSupOptions {
  int grid_factor = 64;   // evaluation grid of grid_factor * N points (at least 256)
  int random_tests = 16;
  std::uint64_t seed = 42;
};

NormValue op_norm(const AlgebraElement& a, const TrigSupOptions& trig = {});

/// Lower bound on the multiplier norm over the test-function family.
NormValue trig_sup_lower(const Eigen::VectorXcd& m, const TrigSupOptions& trig = {});
/// sup|T f| / sup|f| for the test function with coefficients `a` (k = -N..N).
/// With `unit_sup` the true sup of f is taken to be 1; otherwise the grid sup
/// is inflated to a certified upper bound on the true sup.
double trig_sup_ratio(const Eigen::VectorXcd& m, const Eigen::VectorXcd& a, bool unit_sup,
                      int grid_factor = 64);
/// (1/2pi) ||sum m~_k e^{ikt}||_L1 with m~ the de la Vallee Poussin taper to 2N.
double trig_sup_upper(const Eigen::VectorXcd& m, int grid_factor = 64);

struct SpectralRadius {
  double value = 0;
  double gelfand = 0; // cross-check for general matrices, else equal to value
  bool inconclusive = false;
};

SpectralRadius spectral_radius(const AlgebraElement& a);

struct HermitianCheck {
  bool is_hermitian = false;
  double max_deviation = 0;
  double worst_t = 0;
};

/// 201 points on [-10, 10] plus 20 seeded points in [-100, 100].
std::vector<double> default_t_grid(std::uint64_t seed = 42);

HermitianCheck hermitian_check(const AlgebraElement& a, const std::vector<double>& t_grid,
                               double herm_tol = 1e-8);

/// exp(i t A) as an element of the same algebra (multipliers: e^{i t m_k}).
AlgebraElement element_exp(const AlgebraElement& a, double t);

/// Multiplier F(s k), k = -N..N.
AlgebraElement multiplier_apply(const SymbolExpr& f, int n, double s);

/// F(a) by walking the symbol tree: polynomials by Horner, exponentials by
/// matrix_exp, sums and products in the algebra. Diagonal and multiplier
/// kinds apply F entrywise. Matrix results are `general` with the input norm.
AlgebraElement apply_symbol(const SymbolExpr& f, const AlgebraElement& a);

/// Seeded Hermitian matrix with spectral radius `radius`.
Eigen::MatrixXcd random_self_adjoint(int n, double radius, std::uint64_t seed);

} // namespace usym
