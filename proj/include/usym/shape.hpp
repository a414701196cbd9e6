#pragma once

// Grid evidence for the shape constraints on universal symbols: the set where
// |F| attains its infimum is connected, |F| is strictly monotone and unbounded
// off that set, and a bounded universal symbol is c * exp(i alpha x).

#include "usym/symbols.hpp"
#include "usym/types.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace usym {

struct ShapeTolerances {
  double min_rel = 1e-9;      // min_tol = min_rel * (1 + grid_min)
  double flat_rel = 1e-7;     // |F| constant on the grid
  double mult_abs = 1e-6;     // |G(x+y) - G(x)G(y)|
  double growth_factor = 1.5; // max|F| growth from first to last window
  double peak_rel = 1e-12;    // slack for the discrete relative-maximum test
};

struct Interval {
  double lo = 0;
  double hi = 0;
};

/// Grid approximation of the minimum set {x : |F(x)| = inf |F|}.
struct MinSetApprox {
  Window window;
  std::vector<Interval> components; // sorted, disjoint, endpoints on the grid
  double grid_min = 0;
};

struct ExponentialFit {
  Complex c;
  double alpha = 0;
  double residual = 0; // max |G(x+y) - G(x)G(y)| over the sampled pairs
};

struct ShapeVerdict {
  bool connected = false;
  bool strictly_monotone_off_min = false;
  bool growth_witnessed = false;
  std::optional<ExponentialFit> bounded_exponential;
  std::vector<MinSetApprox> windows;
  double max_abs_first = 0;
  double max_abs_last = 0;

  bool rejected() const;
  /// Empty unless rejected().
  std::string reason() const;
};

/// A grid point joins the minimum set when |F| there is within min_tol of the
/// grid minimum, or within one local grid step of it (a zero of F falling
/// between two grid points). Maximal runs of such points form the components.
MinSetApprox min_set(const SymbolExpr& f, const Window& window,
                     const ShapeTolerances& tol = {});

ShapeVerdict shape_verdict(const SymbolExpr& f, std::span<const Window> schedule,
                           const ShapeTolerances& tol = {});

/// Detects F = c * exp(i alpha x) on [-W, W]: |F| flat on the grid and
/// G = F / F(0) multiplicative on sampled pairs; alpha is the least-squares
/// slope of the unwrapped phase of G.
std::optional<ExponentialFit> exponential_detector(const SymbolExpr& f, const Window& window,
                                                   const ShapeTolerances& tol = {});

} // namespace usym
