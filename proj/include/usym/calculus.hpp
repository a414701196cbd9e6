#pragma once

// Functional calculus F(a) = integral exp(ita) dmu(t) for finite atomic
// measures, the polynomial (holomorphic) route, and their consistency.

#include "usym/algebras.hpp"
#include "usym/symbols.hpp"
#include "usym/types.hpp"

#include <cstdint>
#include <vector>

namespace usym {

struct Atom {
  double t = 0;
  Complex w;
};

/// Finite atomic complex measure; atoms sorted by t with distinct t.
class Measure {
 public:
  Measure() = default;
  /// Sorts by t and merges atoms closer than 1e-12.
  explicit Measure(std::vector<Atom> atoms);

  static Measure dirac(double t, Complex w = 1.0);

  const std::vector<Atom>& atoms() const { return atoms_; }
  double tv() const { return tv_; }
  /// Fourier-Stieltjes transform sum_j w_j e^{i t_j x}.
  Complex transform(double x) const;

  /// The measure whose transform is x -> transform(x + s).
  Measure shifted(double s) const;
  Measure scaled(Complex c) const;

  friend Measure operator+(const Measure& a, const Measure& b);

 private:
  std::vector<Atom> atoms_;
  double tv_ = 0;
};

/// Atoms pairwise: transform of the result is the product of transforms.
Measure convolve(const Measure& a, const Measure& b);

/// Bochner measure of the anti-periodic triangle wave phi with
/// phi(x) = 1 - x/L on [0, 2L], phi even, phi(x + 2L) = -phi(x), truncated
/// to odd k <= K: atoms +-k pi / (2L) of weight 4 / (pi^2 k^2).
/// On [-L, L], x = -L phi(x + L).
Measure linear_symbol_measure(double L, int K);

/// sum_{odd k > K} 8 / (pi^2 k^2): sup-norm error of the truncated wave.
double triangle_tail(int K);

/// sum_j w_j exp(i t_j A), atoms in ascending t.
AlgebraElement bochner_apply(const Measure& mu, const AlgebraElement& a);

/// Horner evaluation; throws std::invalid_argument for non-polynomial F.
AlgebraElement holomorphic_apply(const SymbolExpr& f, const AlgebraElement& a);

/// tv(mu) - upper bound of ||mu^(a)||.
double norm_bound_check(const Measure& mu, const AlgebraElement& a);

/// Hausdorff distance between sigma(F(a)) and F(sigma(a)) for diagonal and
/// multiplier kinds.
double spectral_mapping_check(const SymbolExpr& f, const AlgebraElement& a);

/// F = x on [-L, L] through the triangle measure: -L * (mu shifted by L)(A).
AlgebraElement linear_route(const Measure& mu, double L, const AlgebraElement& a);

/// F = x^2 on [-L, L] through mu * mu: L^2 * ((mu * mu) shifted by L)(A).
AlgebraElement quadratic_route(const Measure& mu, double L, const AlgebraElement& a);

struct CalculusRow {
  std::uint64_t seed = 0;
  double route_gap = 0;   // ||holomorphic - Bochner||_2 for F = x
  double route_bound = 0; // L * 8 / (pi^2 K)
  double slack = 0;       // norm_bound_check of the shifted triangle measure
  double quadratic_gap = 0;
  double quadratic_bound = 0;
};

/// `count` seeded self-adjoint dim x dim elements with spectral radius L.
std::vector<CalculusRow> calculus_experiment(int dim, double L, int K, std::uint64_t seed,
                                             int count = 10, bool quadratic = false);

} // namespace usym
